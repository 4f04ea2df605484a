#pragma once

#include <stdexcept>
#include <string>

namespace lssot {

enum class errc {
  negative_weight,
  empty_measure,
  not_finite,
  grid_mismatch,
  bad_dimension,
  all_points_capped,
  dimension_mismatch,
  slice_set_mismatch,
  no_common_slices,
  embedding_failed,
  bad_kappa,
  bad_config,
  io_error,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw error(code, what); }

}  // namespace lssot
