#pragma once

#include <stdexcept>
#include <string>

namespace thinfilm {

// Which of the four flow systems a run or report refers to.
enum class ModelKind {
  muskat_capillary,
  muskat_gravity,
  stokes_capillary,
  stokes_gravity,
};

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::muskat_capillary: return "muskat_capillary";
    case ModelKind::muskat_gravity: return "muskat_gravity";
    case ModelKind::stokes_capillary: return "stokes_capillary";
    case ModelKind::stokes_gravity: return "stokes_gravity";
  }
  return "unknown";
}

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "muskat_capillary") return ModelKind::muskat_capillary;
  if (s == "muskat_gravity") return ModelKind::muskat_gravity;
  if (s == "stokes_capillary") return ModelKind::stokes_capillary;
  if (s == "stokes_gravity") return ModelKind::stokes_gravity;
  throw std::invalid_argument("unknown model kind: " + s);
}

constexpr bool is_muskat(ModelKind k) {
  return k == ModelKind::muskat_capillary || k == ModelKind::muskat_gravity;
}

constexpr bool is_stokes(ModelKind k) { return !is_muskat(k); }

}  // namespace thinfilm
