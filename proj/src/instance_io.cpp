#include "statlab/instance_io.hpp"

#include <cmath>

#include "statlab/error.hpp"
#include "statlab/oracle.hpp"

namespace statlab {

nlohmann::json instance_to_json(const InstanceSpec& s) {
  nlohmann::json j = {{"kind", s.kind}};
  if (s.delta) j["delta"] = *s.delta;
  if (s.w) j["w"] = vector_to_json(*s.w);
  if (s.clamp) j["clamp"] = *s.clamp;
  if (s.x_star) j["x_star"] = vector_to_json(*s.x_star);
  if (s.T) j["T"] = *s.T;
  if (s.d) j["d"] = *s.d;
  if (s.k) j["k"] = *s.k;
  if (s.T) {
    nlohmann::json frame = nlohmann::json::array();
    for (const Vector& u : s.rotation_frame) frame.push_back(vector_to_json(u));
    j["rotation_frame"] = frame;
  }
  return j;
}

InstanceSpec instance_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ConfigError("instance: expected a JSON object");
    InstanceSpec s;
    s.kind = j.at("kind").get<std::string>();
    if (j.contains("delta")) s.delta = j.at("delta").get<double>();
    if (j.contains("w")) s.w = vector_from_json(j.at("w"));
    if (j.contains("clamp") && !j.at("clamp").is_null()) s.clamp = j.at("clamp").get<double>();
    if (j.contains("x_star")) s.x_star = vector_from_json(j.at("x_star"));
    if (j.contains("T")) s.T = j.at("T").get<int>();
    if (j.contains("d")) s.d = j.at("d").get<std::size_t>();
    if (j.contains("k")) s.k = j.at("k").get<double>();
    if (j.contains("rotation_frame")) {
      for (const auto& u : j.at("rotation_frame")) s.rotation_frame.push_back(vector_from_json(u));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("instance: ") + e.what());
  } catch (const PreconditionViolation& e) {
    throw ConfigError(std::string("instance: ") + e.what());
  }
}

InstanceSpec spec_from_channel(const ChannelInstance& c) {
  InstanceSpec s;
  s.kind = "channel";
  s.w = c.w();
  s.clamp = c.clamp();
  if (c.affine()) {
    auto geom = std::dynamic_pointer_cast<const ChainGeometry>(c.affine()->map);
    if (!geom) throw PreconditionViolation("spec_from_channel: affine map is not a chain geometry");
    s.x_star = c.affine()->x_star;
    s.T = geom->base().T();
    s.d = geom->base().d();
    s.k = geom->base().k();
    if (!geom->is_natural()) s.rotation_frame = geom->frame();
  }
  return s;
}

namespace {

std::shared_ptr<const ChainGeometry> chain_geometry_from(const InstanceSpec& s) {
  if (!s.T || !s.d) throw ConfigError("instance '" + s.kind + "': chain parameters T and d required");
  if (*s.T < 2 || *s.d < static_cast<std::size_t>(*s.T)) throw ConfigError("instance: need T >= 2 and d >= T");
  if (s.k && *s.k != HardQuadratic::chain_k()) {
    throw ConfigError("instance: k must equal (sqrt 2 + 3) / (sqrt 2 + 1)");
  }
  auto hq = std::make_shared<const HardQuadratic>(*s.T, *s.d);
  if (s.rotation_frame.empty()) return ChainGeometry::natural(hq);
  if (s.rotation_frame.size() != static_cast<std::size_t>(*s.T)) {
    throw ConfigError("instance: rotation_frame must hold exactly T vectors");
  }
  OrthonormalFrame frame(*s.d);
  for (const Vector& u : s.rotation_frame) {
    try {
      frame.append(u);
    } catch (const Error& e) {
      throw ConfigError(std::string("instance: rotation_frame not orthonormal: ") + e.what());
    }
  }
  return ChainGeometry::rotated(hq, s.rotation_frame);
}

void require_delta(const InstanceSpec& s) {
  if (!s.delta || !(*s.delta > 0.0)) throw ConfigError("instance '" + s.kind + "': positive delta required");
}

}  // namespace

BuiltInstance build_instance(const InstanceSpec& s) {
  BuiltInstance b;
  b.kind = s.kind;
  try {
    if (s.kind == "spiral" || s.kind == "spiral_extended") {
      require_delta(s);
      SpiralCounterexample sp(*s.delta, s.kind == "spiral_extended");
      b.dim = 2;
      b.eval = [sp](const Vector& x) { return spiral_eval(sp, x); };
    } else if (s.kind == "warga") {
      b.dim = 2;
      b.eval = [](const Vector& x) { return warga_eval(x); };
    } else if (s.kind == "channel") {
      if (!s.w) throw ConfigError("instance 'channel': w required");
      std::optional<AffineComposition> affine;
      if (s.T || s.d) {
        b.geometry = chain_geometry_from(s);
        affine = AffineComposition{b.geometry, s.x_star ? *s.x_star : b.geometry->x_star()};
      }
      ChannelInstance c(*s.w, s.clamp, affine);
      b.dim = c.dim();
      b.channel = c;
      b.eval = [c](const Vector& x) { return channel_eval(c, x); };
    } else if (s.kind == "norm_distance") {
      b.geometry = chain_geometry_from(s);
      NormDistance n(b.geometry, s.x_star ? *s.x_star : b.geometry->x_star());
      b.dim = n.dim();
      b.eval = [n](const Vector& x) { return norm_distance_eval(n, x); };
    } else if (s.kind == "chain_quadratic") {
      b.geometry = chain_geometry_from(s);
      auto g = b.geometry;
      b.dim = g->dim();
      b.eval = [g](const Vector& x) { return g->quadratic(x); };
    } else {
      throw ConfigError("unknown function kind: " + s.kind);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("instance '") + s.kind + "': " + e.what());
  }
  return b;
}

}  // namespace statlab
