#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

#include "statlab/chain.hpp"
#include "statlab/oracle.hpp"

namespace statlab {

/// Answers the chain quadratic through its chain form, O(T + d) per query
/// in the natural frame.
class ChainQuadraticOracle final : public Oracle {
 public:
  explicit ChainQuadraticOracle(std::shared_ptr<const ChainGeometry> geometry);
  std::size_t dim() const override { return geometry_->dim(); }
  FirstOrderReply query(const Vector& x) override { return geometry_->quadratic(x); }

 private:
  std::shared_ptr<const ChainGeometry> geometry_;
};

/// Resisting oracle for deterministic algorithms: before answering query t it
/// commits to a unit u_t orthogonal to u_1..u_{t-1} and to x_1..x_t, then
/// answers g(Ux) using the directions chosen so far.
class RotationOracle final : public Oracle {
 public:
  /// Requires d >= 2T.
  explicit RotationOracle(std::shared_ptr<const HardQuadratic> base);

  std::size_t dim() const override { return base_->d(); }
  FirstOrderReply query(const Vector& x) override;
  bool is_pure() const override { return false; }

  const OrthonormalFrame& frame() const noexcept { return frame_; }
  const std::vector<Vector>& seen() const noexcept { return seen_; }
  const HardQuadratic& base() const noexcept { return *base_; }

  /// The committed rotation, completed to T directions if fewer queries arrived.
  std::shared_ptr<const ChainGeometry> materialize() const;

 private:
  std::shared_ptr<const HardQuadratic> base_;
  OrthonormalFrame frame_;
  std::vector<Vector> seen_;
};

/// Turns a nonnegative quadratic oracle into its square root.
class SqrtOracle final : public Oracle {
 public:
  explicit SqrtOracle(Oracle& inner) : inner_(inner) {}
  std::size_t dim() const override { return inner_.dim(); }
  FirstOrderReply query(const Vector& x) override { return sqrt_oracle_transform(inner_.query(x), x); }
  bool is_pure() const override { return inner_.is_pure(); }

 private:
  Oracle& inner_;
};

enum class ChannelMode { deterministic_orthogonal, randomized_sphere };
enum class BaseGeometry { automatic, natural, rotation };

std::string_view to_string(ChannelMode m);
std::string_view to_string(BaseGeometry g);

struct ChannelAdversaryConfig {
  ChannelMode mode = ChannelMode::deterministic_orthogonal;
  /// Defaults to exp(-T) / 300.
  std::optional<double> w_norm;
  /// automatic: natural frame for linear-span algorithms, rotation otherwise.
  BaseGeometry geometry = BaseGeometry::automatic;

  static constexpr double kMinWNorm = 1e-11;
  double resolved_w_norm(int T) const;
};

struct ChannelBuild {
  ChannelInstance instance;
  std::shared_ptr<const ChainGeometry> geometry;
  BaseGeometry geometry_kind;
  NormDistance f_tilde;
  /// The algorithm's game on f~ evaluated directly; w is chosen against these iterates.
  Transcript f_transcript;
  /// The same game through the square root of the quadratic oracle.
  Transcript sqrt_route_transcript;
  std::vector<double> distances;
  std::vector<double> alignments;
  std::vector<bool> almosthard2;
  double max_alignment = 0.0;
  /// Replay on h_w reproduced the f~ queries bit for bit.
  bool replay_identical = false;
  double w_norm = 0.0;
  ChannelMode mode = ChannelMode::deterministic_orthogonal;

  bool all_almosthard2() const;
  nlohmann::json diagnostics() const;
};

/// Builds h_w against the given algorithm: plays it on f~, then picks w
/// orthogonal to every M^{1/2}(x_t - x*) (deterministic mode) or uniformly on
/// the sphere of radius w_norm (randomized mode).
///
/// Throws ConstructionFailure when an iterate comes within exp(-T) of x* or a
/// linear-span algorithm leaves its span.
ChannelBuild build_channel_instance(const ChannelAdversaryConfig& cfg, const AlgorithmDescriptor& algorithm, int T,
                                    std::size_t d, const Rng& rng);

/// 1/(2 sqrt 2) - exp(-T) / (100 ||x - x*||)
double almosthard2_threshold(int T, double distance_to_x_star);

}  // namespace statlab
