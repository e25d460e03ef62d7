#pragma once

#include <optional>
#include <string>

#include "lqrpg/flow.hpp"
#include "lqrpg/problem.hpp"
#include "lqrpg/trace.hpp"

namespace lqrpg {

/// On-disk problem description: JSON with explicit dimensions and row-major
/// nested arrays, numbers printed with 17 significant digits.
///
///   {"label": "...", "n": 3, "m": 1, "r": 2,
///    "A": [[...], ...], "B": ..., "C": ..., "Q": ..., "R": ..., "Sigma": ...,
///    "K0": [[...]]}            // K0 and label optional
struct ProblemFile {
  LqrProblem problem;
  std::optional<Gain> K0;
};

std::string problem_to_json(const ProblemFile& file);
/// Throws ValidationError with the line/field on malformed or inconsistent input.
ProblemFile problem_from_json(const std::string& text);

/// Throws IoError when the file cannot be read or written.
ProblemFile load_problem(const std::string& path);
void save_problem(const std::string& path, const ProblemFile& file);

/// CSV with header iter,f,grad_norm,step,shrinks,stabilizing; one row per iteration.
std::string trace_to_csv(const RunTrace& trace);
void save_trace(const std::string& path, const RunTrace& trace);

/// CSV with header t,f,grad_norm,k_1,...; one row per sample (row-major K).
std::string flow_to_csv(const FlowTrace& trace);
void save_flow_trace(const std::string& path, const FlowTrace& trace);

/// Writes text to path, throwing IoError on failure.
void write_text_file(const std::string& path, const std::string& text);

/// Row-major nested array with 17 significant digits.
std::string matrix_to_json(const Matrix& M);

/// Formats a double with 17 significant digits ("%.17g").
std::string format_number(double v);

}  // namespace lqrpg
