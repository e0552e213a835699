#pragma once

#include <stdexcept>
#include <string>

namespace pvi {

struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

#define PVI_DEFINE_ERROR(name)                                   \
  struct name : error {                                          \
    explicit name(const std::string& msg) : error(msg) {}        \
  }

PVI_DEFINE_ERROR(physical_condition_violated);
PVI_DEFINE_ERROR(hyperbolicity_lost);
PVI_DEFINE_ERROR(out_of_window);
PVI_DEFINE_ERROR(no_root);
PVI_DEFINE_ERROR(degenerate_jacobian);
PVI_DEFINE_ERROR(front_too_large);
PVI_DEFINE_ERROR(under_resolved);
PVI_DEFINE_ERROR(singular_transform);
PVI_DEFINE_ERROR(constraint_violated);
PVI_DEFINE_ERROR(incompatible_state);
PVI_DEFINE_ERROR(cfl_violation);
PVI_DEFINE_ERROR(unstable_blowup);
PVI_DEFINE_ERROR(no_contraction);
PVI_DEFINE_ERROR(shape_mismatch);
PVI_DEFINE_ERROR(parse_error);
PVI_DEFINE_ERROR(validation_error);

#undef PVI_DEFINE_ERROR

}  // namespace pvi
