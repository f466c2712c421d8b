#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "statlab/kernels.hpp"
#include "statlab/minnorm.hpp"
#include "statlab/oracle.hpp"
#include "statlab/zoo.hpp"

namespace statlab {

/// Explicit constants of the channel construction.
struct ConstantsTable {
  double lipschitz_channel;
  double stationarity_threshold;
  double value_gap;
  double distance_bound;
  double lipschitz_spiral_ball;

  static const ConstantsTable& standard();
  nlohmann::json to_json() const;
};

enum class CertificateKind {
  eps_stationary_witness,
  delta_eps_witness,
  near_distance_lower_bound,
  subdiff_norm_lower_bound,
};

std::string_view to_string(CertificateKind k);

struct Witness {
  std::vector<Vector> points;
  std::vector<Vector> subgradients;
  std::vector<double> coefficients;

  /// sum_i coefficients[i] * subgradients[i]
  Vector combination() const;
};

struct StationarityCertificate {
  CertificateKind kind = CertificateKind::eps_stationary_witness;
  double value = 0.0;
  /// Present when the requested level was certified by an explicit combination.
  std::optional<Witness> witness;
  const ConstantsTable* constants = &ConstantsTable::standard();
  /// For sampled certificates: which direction the evidence is sound in.
  std::string sound_direction;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// One query at x: value = norm of the returned subgradient; witness if <= eps.
StationarityCertificate certify_eps(Oracle& oracle, const Vector& x, double eps);

struct Sampling {
  enum class Kind { ball_uniform, stencil };
  Kind kind = Kind::ball_uniform;
  std::size_t samples = 0;
  /// Offsets from x (stencil only).
  std::vector<Vector> offsets;

  static Sampling ball_uniform(std::size_t n);
  static Sampling stencil(std::vector<Vector> offsets);
};

/// Min-norm element of the hull of subgradients at sampled points of the closed
/// delta-ball around x. A value <= eps comes with a witness and proves
/// (delta, eps)-stationarity; a larger value proves nothing.
StationarityCertificate certify_delta_eps(Oracle& oracle, const Vector& x, double delta, double eps,
                                          const Sampling& sampling, Rng& rng, Exec exec = Exec::parallel);

/// Proven lower bound on the smallest Clarke subgradient norm of the channel at x.
/// Throws PreconditionViolation in the clamp regions.
StationarityCertificate subdiff_norm_lower_bound(const ChannelInstance& c, const Vector& x);

/// max(0, (h(x) - clamp) / 7): distance from x to any point whose value is the clamp level.
StationarityCertificate near_stationarity_distance_lb(const ChannelInstance& c, const Vector& x);

}  // namespace statlab
