#include "statlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "statlab/error.hpp"

namespace statlab {

FirstOrderReply FunctionOracle::query(const Vector& x) {
  if (x.dim() != dim_) throw DimensionMismatch(dim_, x.dim(), "FunctionOracle");
  return eval_(x);
}

Transcript::Transcript(std::size_t budget, std::size_t dim) : budget_(budget), dim_(dim) {
  if (budget == 0) throw PreconditionViolation("Transcript: budget must be >= 1");
  if (dim == 0) throw PreconditionViolation("Transcript: dim must be >= 1");
  entries_.reserve(budget);
}

void Transcript::append(Vector query, FirstOrderReply reply) {
  if (entries_.size() >= budget_) throw BudgetExceeded("Transcript: budget exhausted");
  if (query.dim() != dim_) throw DimensionMismatch(dim_, query.dim(), "Transcript query");
  if (reply.subgrad.dim() != dim_) throw DimensionMismatch(dim_, reply.subgrad.dim(), "Transcript subgradient");
  entries_.push_back({std::move(query), std::move(reply)});
}

std::vector<Vector> Transcript::queries() const {
  std::vector<Vector> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.query);
  return out;
}

std::string_view to_string(AlgorithmClass c) {
  switch (c) {
    case AlgorithmClass::deterministic: return "deterministic";
    case AlgorithmClass::linear_span: return "linear_span";
    case AlgorithmClass::randomized: return "randomized";
  }
  return "?";
}

nlohmann::json AlgorithmDescriptor::to_json() const {
  return {{"name", name}, {"class", to_string(class_tag)}, {"uses_randomness", uses_randomness}, {"params", params}};
}

Transcript play(const AlgorithmDescriptor& algorithm, Oracle& oracle, std::size_t T, std::size_t d,
                const Rng& rng) {
  if (T < 1 || d < 1) throw PreconditionViolation("play: T and d must be >= 1");
  if (oracle.dim() != d) throw DimensionMismatch(d, oracle.dim(), "play: oracle");
  if (!algorithm.factory) throw PreconditionViolation("play: algorithm has no factory");
  std::unique_ptr<Player> player = algorithm.factory(d, rng.derive("algorithm"));
  Transcript transcript(T, d);
  for (std::size_t t = 1; t <= T; ++t) {
    std::optional<Vector> q = player->propose();
    if (!q) break;
    if (q->dim() != d) throw DimensionMismatch(d, q->dim(), "play: proposed query");
    FirstOrderReply reply{0.0, Vector::zeros(d), false};
    try {
      reply = oracle.query(*q);
    } catch (const OracleFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw OracleFailure(std::string("oracle failed at query ") + std::to_string(t) + ": " + e.what(),
                          q->raw(), t);
    }
    transcript.append(*q, reply);
    player->observe(*q, reply);
  }
  return transcript;
}

namespace {

// subtract projections onto an orthonormal list, twice
Vector project_out(const std::vector<Vector>& basis, Vector v) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& b : basis) axpy(-inner(b, v), b, v);
  }
  return v;
}

}  // namespace

SpanCheck validate_span(const Transcript& t, double tol) {
  if (t.empty()) throw PreconditionViolation("validate_span: empty transcript");
  SpanCheck result;
  std::vector<Vector> basis;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Vector& x = t[i].query;
    const double residual = norm(project_out(basis, x));
    result.max_residual = std::max(result.max_residual, residual);
    if (residual > tol * std::max(1.0, norm(x)) && result.ok) {
      result.ok = false;
      result.first_violation = i + 1;
    }
    const Vector& g = t[i].reply.subgrad;
    const double gn = norm(g);
    if (gn == 0.0) continue;
    Vector r = project_out(basis, g);
    const double rn = norm(r);
    if (rn > 1e-10 * gn) basis.push_back(r / rn);
  }
  return result;
}

double min_distance_to(const Transcript& t, const Vector& target) {
  if (t.empty()) throw PreconditionViolation("min_distance_to: empty transcript");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : t) best = std::min(best, distance(e.query, target));
  return best;
}

nlohmann::json vector_to_json(const Vector& v) { return nlohmann::json(v.raw()); }

Vector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of numbers");
  return Vector(j.get<std::vector<double>>());
}

nlohmann::json reply_to_json(const FirstOrderReply& r) {
  return {{"value", r.value}, {"subgrad", vector_to_json(r.subgrad)}, {"differentiable", r.differentiable}};
}

void write_jsonl(const Transcript& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    nlohmann::json line = {{"index", i + 1},
                           {"query", vector_to_json(t[i].query)},
                           {"value", t[i].reply.value},
                           {"subgrad", vector_to_json(t[i].reply.subgrad)},
                           {"differentiable", t[i].reply.differentiable}};
    out << line.dump() << '\n';
  }
}

Transcript read_jsonl(std::istream& in, std::size_t budget) {
  std::vector<TranscriptEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    entries.push_back({vector_from_json(j.at("query")),
                       {j.at("value").get<double>(), vector_from_json(j.at("subgrad")),
                        j.at("differentiable").get<bool>()}});
  }
  if (entries.empty()) throw ConfigError("read_jsonl: no entries");
  Transcript t(std::max(budget, entries.size()), entries.front().query.dim());
  for (auto& e : entries) t.append(std::move(e.query), std::move(e.reply));
  return t;
}

}  // namespace statlab
