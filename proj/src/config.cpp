#include "snmf/config.hpp"

#include <cmath>
#include <sstream>

#include "snmf/error.hpp"

namespace snmf {

void require_lagrangian_supported(RegularizerKind regularizer, double beta) {
  if (regularizer != RegularizerKind::L1) {
    throw ConfigError("the Lagrangian method is only available with l1 regularization");
  }
  if (!(beta <= 1.0)) {
    std::ostringstream msg;
    msg << "the Lagrangian method applies to specific values of beta only; supported range is "
           "beta <= 1, got beta = "
        << beta;
    throw ConfigError(msg.str());
  }
}

void SolverConfig::validate() const {
  if (!std::isfinite(beta)) throw ConfigError("beta must be finite");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be >= 0");
  if (rank < 1) throw ConfigError("rank K must be >= 1");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be >= 0");
  if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
  if (!(init_sigma > 0.0)) throw ConfigError("init_sigma must be > 0");
  if (regularizer == RegularizerKind::Log && !(epsilon > 0.0)) {
    throw ConfigError("epsilon must be > 0 for log regularization");
  }
  if (method == Method::Lagrangian) require_lagrangian_supported(regularizer, beta);
}

std::string_view to_string(RegularizerKind kind) {
  return kind == RegularizerKind::L1 ? "l1" : "log";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::MM: return "mm";
    case Method::Heuristic: return "heur";
    case Method::Lagrangian: return "lagr";
  }
  return "?";
}

RegularizerKind parse_regularizer(std::string_view text) {
  if (text == "l1") return RegularizerKind::L1;
  if (text == "log") return RegularizerKind::Log;
  throw ConfigError("unknown regularizer '" + std::string(text) + "' (expected l1 or log)");
}

Method parse_method(std::string_view text) {
  if (text == "mm") return Method::MM;
  if (text == "heur") return Method::Heuristic;
  if (text == "lagr") return Method::Lagrangian;
  throw ConfigError("unknown method '" + std::string(text) + "' (expected mm, heur or lagr)");
}

}  // namespace snmf
