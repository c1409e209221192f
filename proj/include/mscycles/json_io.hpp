#pragma once

#include <string>

#include "mscycles/estimation.hpp"
#include "mscycles/model.hpp"

namespace mscycles {

// Schema: a1 (row-major 4), a2 (2 diagonal entries), sigma1/sigma2
// (v11, v12, v22), trans (row-major 4), init (2). Doubles round-trip
// bit-exactly through the shortest decimal representation.
std::string model_to_json(const MsVarModel& model, int indent = 2);
MsVarModel model_from_json(const std::string& text);

// Model schema plus se (mirrored layout), loglik, iterations, converged.
std::string estimation_to_json(const EstimationResult& result, int indent = 2);

}  // namespace mscycles
