#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "statlab/chain.hpp"
#include "statlab/kernels.hpp"
#include "statlab/zoo.hpp"

namespace statlab {

/// Serializable construction parameters of any zoo function.
///
/// kind is one of spiral, spiral_extended, channel, norm_distance, warga,
/// chain_quadratic. Channel instances with an affine part and norm_distance
/// carry the chain parameters (T, d, k) and the rotation frame (empty for the
/// natural frame).
struct InstanceSpec {
  std::string kind;
  std::optional<double> delta;
  std::optional<Vector> w;
  std::optional<double> clamp;
  std::optional<Vector> x_star;
  std::optional<int> T;
  std::optional<std::size_t> d;
  std::optional<double> k;
  std::vector<Vector> rotation_frame;
};

nlohmann::json instance_to_json(const InstanceSpec& spec);
InstanceSpec instance_from_json(const nlohmann::json& j);

/// Spec of a channel instance; the affine map, if any, must be a ChainGeometry.
InstanceSpec spec_from_channel(const ChannelInstance& c);

struct BuiltInstance {
  std::string kind;
  std::size_t dim = 0;
  PureEval eval;
  std::optional<ChannelInstance> channel;
  std::shared_ptr<const ChainGeometry> geometry;
};

/// Validates a spec and returns its evaluator. Throws ConfigError on bad specs.
BuiltInstance build_instance(const InstanceSpec& spec);

}  // namespace statlab
