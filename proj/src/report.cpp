#include "qha/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qha/common.hpp"
#include "qha/phase_space.hpp"

namespace qha {

ReportEntry& NormReport::add(std::string name, std::string anchor, double value, double tolerance, double lower) {
  ReportEntry e;
  e.name = std::move(name);
  e.anchor = std::move(anchor);
  e.value = value;
  e.tolerance = tolerance;
  e.lower = lower;
  entries.push_back(std::move(e));
  return entries.back();
}

ReportEntry& NormReport::skip(std::string name, std::string anchor, std::string note) {
  ReportEntry& e = add(std::move(name), std::move(anchor), std::nan(""), 0.0);
  e.skipped = true;
  e.note = std::move(note);
  return e;
}

void NormReport::merge(const NormReport& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

bool NormReport::all_pass() const {
  for (const auto& e : entries)
    if (!e.pass()) return false;
  return true;
}

const ReportEntry* NormReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

namespace {

nlohmann::json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double read_number(const nlohmann::json& j) {
  if (j.is_null()) return std::nan("");
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw QhaError("report: bad number '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

nlohmann::json to_json(const NormReport& r) {
  nlohmann::json out;
  out["metadata"] = r.metadata;
  out["entries"] = nlohmann::json::array();
  for (const auto& e : r.entries) {
    nlohmann::json je{{"name", e.name},          {"anchor", e.anchor},     {"value", number(e.value)},
                      {"tolerance", number(e.tolerance)}, {"lower", number(e.lower)}, {"pass", e.pass()}};
    if (e.skipped) je["skipped"] = true;
    if (!e.note.empty()) je["note"] = e.note;
    if (!e.extra.empty()) {
      nlohmann::json ex = nlohmann::json::object();
      for (const auto& [k, v] : e.extra) ex[k] = number(v);
      je["values"] = ex;
    }
    out["entries"].push_back(std::move(je));
  }
  return out;
}

NormReport report_from_json(const nlohmann::json& j) {
  NormReport r;
  if (!j.contains("entries") || !j["entries"].is_array()) throw QhaError("report: missing entries array");
  if (j.contains("metadata")) r.metadata = j["metadata"];
  for (const auto& je : j["entries"]) {
    ReportEntry e;
    e.name = je.at("name").get<std::string>();
    e.anchor = je.at("anchor").get<std::string>();
    e.value = read_number(je.at("value"));
    e.tolerance = read_number(je.at("tolerance"));
    e.lower = je.contains("lower") ? read_number(je["lower"]) : -std::numeric_limits<double>::infinity();
    e.skipped = je.value("skipped", false);
    e.note = je.value("note", std::string{});
    if (je.contains("values"))
      for (const auto& [k, v] : je["values"].items()) e.extra[k] = read_number(v);
    if (e.pass() != je.at("pass").get<bool>()) throw QhaError("report: stored verdict of '" + e.name + "' is inconsistent");
    r.entries.push_back(std::move(e));
  }
  return r;
}

namespace {
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}
}  // namespace

std::string to_csv(const NormReport& r) {
  std::ostringstream os;
  os << "name,anchor,value,tolerance,lower,pass,skipped,note\n";
  for (const auto& e : r.entries)
    os << csv_field(e.name) << ',' << csv_field(e.anchor) << ',' << format_double(e.value) << ','
       << format_double(e.tolerance) << ',' << format_double(e.lower) << ',' << (e.pass() ? "true" : "false") << ','
       << (e.skipped ? "true" : "false") << ',' << csv_field(e.note) << '\n';
  return os.str();
}

void emit_report(const NormReport& r, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw QhaError("cannot open '" + path.string() + "' for writing");
  if (format == ReportFormat::json)
    os << to_json(r).dump(2) << '\n';
  else
    os << to_csv(r);
  if (!os) throw QhaError("write failed for '" + path.string() + "'");
}

}  // namespace qha
