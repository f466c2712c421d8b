#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "statlab/rng.hpp"
#include "statlab/vector.hpp"
#include "statlab/zoo.hpp"

namespace statlab {

/// First-order oracle: answers query(x) with a value and one subgradient.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual std::size_t dim() const = 0;
  virtual FirstOrderReply query(const Vector& x) = 0;
  /// True when replies depend only on x, so concurrent evaluation is safe.
  virtual bool is_pure() const { return true; }
};

/// Wraps a pure evaluation function.
class FunctionOracle final : public Oracle {
 public:
  using Eval = std::function<FirstOrderReply(const Vector&)>;
  FunctionOracle(std::size_t dim, Eval eval) : dim_(dim), eval_(std::move(eval)) {}
  std::size_t dim() const override { return dim_; }
  FirstOrderReply query(const Vector& x) override;

 private:
  std::size_t dim_;
  Eval eval_;
};

struct TranscriptEntry {
  Vector query;
  FirstOrderReply reply;

  bool operator==(const TranscriptEntry&) const = default;
};

/// Append-only record of one game.
class Transcript {
 public:
  Transcript(std::size_t budget, std::size_t dim);

  std::size_t budget() const noexcept { return budget_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const TranscriptEntry& operator[](std::size_t i) const { return entries_.at(i); }
  const std::vector<TranscriptEntry>& entries() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  void append(Vector query, FirstOrderReply reply);
  std::vector<Vector> queries() const;

  bool operator==(const Transcript&) const = default;

 private:
  std::size_t budget_;
  std::size_t dim_;
  std::vector<TranscriptEntry> entries_;
};

/// The algorithm side of a game. propose() returns the next query, or nullopt to stop early.
class Player {
 public:
  virtual ~Player() = default;
  virtual std::optional<Vector> propose() = 0;
  virtual void observe(const Vector& query, const FirstOrderReply& reply) = 0;
  virtual nlohmann::json summary() const { return nlohmann::json::object(); }
};

enum class AlgorithmClass { deterministic, linear_span, randomized };

std::string_view to_string(AlgorithmClass c);

struct AlgorithmDescriptor {
  std::string name;
  AlgorithmClass class_tag = AlgorithmClass::deterministic;
  bool uses_randomness = false;
  nlohmann::json params = nlohmann::json::object();
  /// Builds a fresh player for dimension d; randomized players draw from the given stream.
  std::function<std::unique_ptr<Player>(std::size_t dim, Rng rng)> factory;

  /// linear_span members start at 0, as do all bundled solvers.
  Vector initial_point(std::size_t dim) const { return Vector::zeros(dim); }
  nlohmann::json to_json() const;
};

/// Runs up to T rounds. The player's stream is derived from rng as "algorithm".
/// Oracle exceptions are rethrown as OracleFailure carrying the query.
Transcript play(const AlgorithmDescriptor& algorithm, Oracle& oracle, std::size_t T, std::size_t d,
                const Rng& rng);

struct SpanCheck {
  bool ok = true;
  /// 1-based index of the first query outside the span (0 when ok).
  std::size_t first_violation = 0;
  double max_residual = 0.0;
};

/// Checks x_1 = 0 and x_t in span(g_1..g_{t-1}) with residual <= tol * max(1, ||x_t||).
SpanCheck validate_span(const Transcript& t, double tol = 1e-8);

double min_distance_to(const Transcript& t, const Vector& target);

void write_jsonl(const Transcript& t, std::ostream& out);
Transcript read_jsonl(std::istream& in, std::size_t budget);

nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);
nlohmann::json reply_to_json(const FirstOrderReply& r);

}  // namespace statlab
