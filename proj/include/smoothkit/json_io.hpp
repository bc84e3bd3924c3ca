#pragma once

#include <json.hpp>

#include "smoothkit/presentation.hpp"

namespace smoothkit {

using json = nlohmann::ordered_json;

json plot_to_json(const PlotGen& p);
/// `target_dim` is the carrier dimension the components must match.
PlotGen plot_from_json(const json& j, int target_dim);
json scalars_json(std::span<const Scalar> v);
std::vector<Scalar> scalars_from_json(const json& j);

}  // namespace smoothkit
