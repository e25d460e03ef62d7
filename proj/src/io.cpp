#include "lqrpg/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lqrpg/errors.hpp"

namespace lqrpg {

namespace {

using nlohmann::json;

void append_matrix(std::ostringstream& os, const Matrix& M) {
  os << '[';
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    if (i) os << ", ";
    os << '[';
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) os << ", ";
      os << format_number(M(i, j));
    }
    os << ']';
  }
  os << ']';
}

const json& require_field(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) throw ValidationError(std::string("missing field \"") + name + "\"");
  return *it;
}

Eigen::Index read_dim(const json& doc, const char* name) {
  const json& v = require_field(doc, name);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ValidationError(std::string("field \"") + name + "\" must be a positive integer");
  }
  return static_cast<Eigen::Index>(v.get<long long>());
}

Matrix read_matrix(const json& v, const char* name, Eigen::Index rows, Eigen::Index cols) {
  const std::string field = std::string("field \"") + name + "\"";
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows) {
    throw ValidationError(field + " must be an array of " + std::to_string(rows) + " rows");
  }
  Matrix M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError(field + " row " + std::to_string(i) + " must have " + std::to_string(cols) +
                            " entries");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& x = row[static_cast<size_t>(j)];
      if (!x.is_number()) {
        throw ValidationError(field + " entry (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") is not a number");
      }
      M(i, j) = x.get<double>();
    }
  }
  return M;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  return ss.str();
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("error writing " + path);
}

std::string matrix_to_json(const Matrix& M) {
  std::ostringstream os;
  append_matrix(os, M);
  return os.str();
}

std::string problem_to_json(const ProblemFile& file) {
  const LqrProblem& p = file.problem;
  std::ostringstream os;
  os << "{\n";
  os << "  \"label\": " << json(p.label).dump() << ",\n";
  os << "  \"n\": " << p.n() << ",\n  \"m\": " << p.m() << ",\n  \"r\": " << p.r() << ",\n";
  const std::pair<const char*, const Matrix*> fields[] = {{"A", &p.A}, {"B", &p.B}, {"C", &p.C},
                                                          {"Q", &p.Q}, {"R", &p.R}, {"Sigma", &p.Sigma}};
  for (const auto& [name, M] : fields) {
    os << "  \"" << name << "\": ";
    append_matrix(os, *M);
    os << ",\n";
  }
  if (file.K0) {
    os << "  \"K0\": ";
    append_matrix(os, *file.K0);
    os << ",\n";
  }
  std::string out = os.str();
  out.erase(out.size() - 2);  // trailing ",\n"
  out += "\n}\n";
  return out;
}

ProblemFile problem_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const size_t upto = std::min(e.byte, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ValidationError("malformed problem file at line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError("problem file must hold a JSON object");

  ProblemFile out;
  LqrProblem& p = out.problem;
  const Eigen::Index n = read_dim(doc, "n");
  const Eigen::Index m = read_dim(doc, "m");
  const Eigen::Index r = read_dim(doc, "r");
  p.A = read_matrix(require_field(doc, "A"), "A", n, n);
  p.B = read_matrix(require_field(doc, "B"), "B", n, m);
  p.C = read_matrix(require_field(doc, "C"), "C", r, n);
  p.Q = read_matrix(require_field(doc, "Q"), "Q", n, n);
  p.R = read_matrix(require_field(doc, "R"), "R", m, m);
  p.Sigma = read_matrix(require_field(doc, "Sigma"), "Sigma", n, n);
  if (auto it = doc.find("label"); it != doc.end()) {
    if (!it->is_string()) throw ValidationError("field \"label\" must be a string");
    p.label = it->get<std::string>();
  }
  if (auto it = doc.find("K0"); it != doc.end()) out.K0 = read_matrix(*it, "K0", m, r);
  p.validate();
  return out;
}

ProblemFile load_problem(const std::string& path) { return problem_from_json(read_file(path)); }

void save_problem(const std::string& path, const ProblemFile& file) {
  write_text_file(path, problem_to_json(file));
}

std::string trace_to_csv(const RunTrace& trace) {
  std::ostringstream os;
  os << "iter,f,grad_norm,step,shrinks,stabilizing\n";
  for (const auto& rec : trace.iterations) {
    os << rec.index << ',' << format_number(rec.f) << ',' << format_number(rec.grad_norm) << ','
       << format_number(rec.step) << ',' << rec.shrinks << ',' << (rec.stabilizing ? 1 : 0) << '\n';
  }
  return os.str();
}

void save_trace(const std::string& path, const RunTrace& trace) { write_text_file(path, trace_to_csv(trace)); }

std::string flow_to_csv(const FlowTrace& trace) {
  std::ostringstream os;
  os << "t,f,grad_norm";
  const Eigen::Index entries = trace.samples.empty() ? 0 : trace.samples.front().K.size();
  for (Eigen::Index i = 0; i < entries; ++i) os << ",k_" << (i + 1);
  os << '\n';
  for (const auto& s : trace.samples) {
    os << format_number(s.t) << ',' << format_number(s.f) << ',' << format_number(s.grad_norm);
    for (Eigen::Index i = 0; i < s.K.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.K.cols(); ++j) os << ',' << format_number(s.K(i, j));
    }
    os << '\n';
  }
  return os.str();
}

void save_flow_trace(const std::string& path, const FlowTrace& trace) {
  write_text_file(path, flow_to_csv(trace));
}

}  // namespace lqrpg
