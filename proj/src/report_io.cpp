#include "pu/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "pu/errors.hpp"

namespace pu {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_field(std::string_view s, std::size_t line) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidInput("line " + std::to_string(line) + ": not a number: '" + std::string(s) +
                       "'");
  }
  return x;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("empty CSV");
  t.header = split(line);
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != t.header.size()) {
      throw InvalidInput("line " + std::to_string(n) + ": expected " +
                         std::to_string(t.header.size()) + " fields");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_field(f, n));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table trajectory_table(const Trajectory& traj) {
  Table t;
  t.header = {"t", "q", "qd", "qdd", "qddd"};
  t.header.insert(t.header.end(), traj.charge_names.begin(), traj.charge_names.end());
  t.rows.reserve(traj.samples.size());
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& [time, v] = traj.samples[i];
    std::vector<double> row{time, v.q, v.qd, v.qdd, v.qddd};
    for (const auto& c : traj.charges) row.push_back(c[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table flow_table(const FlowCurve& curve) {
  Table t;
  t.header = {"s", "t", "q", "qd", "qdd", "qddd"};
  for (const auto& [time, v] : curve.samples) {
    t.rows.push_back({curve.s, time, v.q, v.qd, v.qdd, v.qddd});
  }
  return t;
}

std::string report_to_json(const VerificationReport& rep) {
  // Non-finite values are not valid JSON numbers and are written as strings.
  auto number = [](double x) {
    return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(format_double(x));
  };
  nlohmann::ordered_json j;
  j["seed"] = rep.seed;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rep.params) {
    params[k] = number(v);
  }
  j["params"] = params;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    nlohmann::ordered_json e;
    e["id"] = c.id;
    e["anchor"] = c.anchor;
    e["pass"] = c.pass;
    e["residual"] = number(c.residual);
    e["samples"] = c.samples;
    checks.push_back(std::move(e));
  }
  j["checks"] = checks;
  nlohmann::ordered_json resolved = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rep.resolved) resolved[k] = v;
  j["resolved"] = resolved;
  j["pass"] = rep.pass();
  return j.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw InvalidInput("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InvalidInput("cannot rename onto " + path.string());
  }
}

}  // namespace pu
