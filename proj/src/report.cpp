#include "modlat/report.hpp"

#include <sstream>

#include "modlat/errors.hpp"

namespace modlat {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

int exit_code(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return 0;
    case Verdict::Fail: return 1;
    case Verdict::Inconclusive: return 3;
  }
  return 3;
}

nlohmann::json CertReport::to_json(bool with_timing) const {
  nlohmann::json j = {{"check", check}, {"verdict", to_string(verdict)}, {"summary", summary}, {"details", details}};
  if (with_timing) j["seconds"] = seconds;
  return j;
}

CertReport CertReport::from_json(const nlohmann::json& j) {
  CertReport r;
  try {
    r.check = j.at("check").get<std::string>();
    const auto v = j.at("verdict").get<std::string>();
    if (v == "pass") {
      r.verdict = Verdict::Pass;
    } else if (v == "fail") {
      r.verdict = Verdict::Fail;
    } else if (v == "inconclusive") {
      r.verdict = Verdict::Inconclusive;
    } else {
      raise(ErrorKind::Parse, "unknown verdict '" + v + "'");
    }
    r.summary = j.at("summary").get<std::string>();
    r.details = j.value("details", nlohmann::json::object());
    r.seconds = j.value("seconds", 0.0);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::Parse, std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string CertReport::render(bool json, bool with_timing) const {
  if (json) return to_json(with_timing).dump(2) + "\n";
  std::ostringstream os;
  os << check << ": " << to_string(verdict) << " - " << summary << "\n";
  for (const auto& [key, value] : details.items()) {
    os << "  " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
  if (with_timing) os << "  seconds: " << seconds << "\n";
  return os.str();
}

}  // namespace modlat
