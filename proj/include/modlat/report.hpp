#pragma once

#include <string>

#include "json.hpp"

namespace modlat {

enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Verdict v) noexcept;
/// 0 pass, 1 fail, 3 inconclusive.
int exit_code(Verdict v) noexcept;

/// Structured result of a certification. `details` holds inputs, witnesses,
/// seeds and hints; wall time is kept out of the rendering unless asked for,
/// so identical runs render identically.
struct CertReport {
  std::string check;
  Verdict verdict = Verdict::Inconclusive;
  std::string summary;
  nlohmann::json details = nlohmann::json::object();
  double seconds = 0.0;

  bool passed() const noexcept { return verdict == Verdict::Pass; }

  nlohmann::json to_json(bool with_timing = false) const;
  static CertReport from_json(const nlohmann::json& j);
  /// One summary line followed by indented details, or a JSON document.
  std::string render(bool json, bool with_timing = false) const;
};

}  // namespace modlat
