#ifndef PVC_ERRORS_HPP
#define PVC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pvc {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct non_finite_error : error {
  using error::error;
};

struct zero_polynomial_error : error {
  using error::error;
};

struct zero_denominator_error : error {
  using error::error;
};

struct degenerate_error : error {
  using error::error;
};

struct degenerate_cell_error : error {
  using error::error;
};

struct bad_barycentric_error : error {
  using error::error;
};

struct bad_dims_error : error {
  using error::error;
};

struct out_of_interval_error : error {
  using error::error;
};

struct io_error : error {
  using error::error;
};

}  // namespace pvc

#endif
