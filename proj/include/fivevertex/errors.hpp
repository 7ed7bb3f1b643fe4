#pragma once
// Exception types shared by the library. Each names the failure the caller
// can react to; all derive from std::runtime_error.

#include <stdexcept>
#include <string>

namespace fivevertex {

#define FIVEVERTEX_ERROR(name)                                   \
  struct name : std::runtime_error {                            \
    explicit name(const std::string& m) : std::runtime_error(m) {} \
  }

FIVEVERTEX_ERROR(singular_argument_error);
FIVEVERTEX_ERROR(critical_weight_error);
FIVEVERTEX_ERROR(regime_error);
FIVEVERTEX_ERROR(invalid_configuration_error);
FIVEVERTEX_ERROR(domain_error);
FIVEVERTEX_ERROR(out_of_phase_error);
FIVEVERTEX_ERROR(convergence_error);
FIVEVERTEX_ERROR(parameter_error);
FIVEVERTEX_ERROR(stencil_error);
FIVEVERTEX_ERROR(critical_point_error);
FIVEVERTEX_ERROR(size_error);
FIVEVERTEX_ERROR(feasibility_error);

#undef FIVEVERTEX_ERROR

struct parse_error : std::runtime_error {
  int line;
  parse_error(int line_no, const std::string& m)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + m), line(line_no) {}
};

}  // namespace fivevertex
