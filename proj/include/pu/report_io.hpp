#pragma once

// Serialisation of reports and numeric tables. Doubles are written in the
// shortest form that reads back to the same value.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pu/dynamics.hpp"
#include "pu/symmetry.hpp"
#include "pu/verify.hpp"

namespace pu {

std::string format_double(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& out, const Table& t);
// Throws InvalidInput on a ragged row or a field that is not a number.
Table read_csv(std::istream& in);

// Columns t,q,qd,qdd,qddd followed by the monitored charges.
Table trajectory_table(const Trajectory& traj);
// Columns s,t,q,qd,qdd,qddd.
Table flow_table(const FlowCurve& curve);

// Two-space indented JSON with a trailing newline.
std::string report_to_json(const VerificationReport& rep);

// Writes to a sibling temporary file and renames it over path.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace pu
