#pragma once

// JSON serialisation of model parameters and fit results.
//
// Parameters file:
//   {"nu": .., "nu_prime": .., "gamma": ..,
//    "gamma_prime": {"HFC": .., "HFA": .., "LFC": .., "LFA": ..},
//    "kappa": .., "g": .., "t1": .., "t2": ..}
// g, t1 and t2 are optional and default to 0.5, pi/2, pi/2.

#include <iosfwd>
#include <string>
#include <string_view>

#include "qem/fit.hpp"
#include "qem/model.hpp"

namespace qem {

// Throws parse_error whose message names the missing or malformed key, and
// domain_error for values outside their admissible range.
ModelParams parse_params(std::string_view json_text);
ModelParams load_params(std::istream& in);

std::string params_to_json(const ModelParams& p);

// {"params": {...}, "rmse": .., "evaluations": ..}
std::string fit_result_to_json(const FitResult& r);

}  // namespace qem
