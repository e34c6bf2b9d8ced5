#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tavi/bregman.hpp"
#include "tavi/objectives.hpp"

namespace tavi {

enum class ProblemKind { Quartic, Wahba };
enum class MethodKind { Ltvi, Htvi, Llgvi };
enum class StepMode { Direct, Adaptive };

struct ProblemConfig {
    ProblemKind kind = ProblemKind::Quartic;
    int dim = 1;                             ///< quartic only
    std::uint64_t seed = 0;                  ///< wahba data matrix seed
    std::optional<std::string> matrix_file;  ///< wahba: CSV file overriding the seed
    std::optional<std::vector<double>> q0;   ///< quartic start, default all zeros
    std::optional<Mat3> r0;                  ///< wahba start attitude, default identity
};

struct MethodConfig {
    MethodKind kind = MethodKind::Ltvi;
    StepMode mode = StepMode::Direct;
};

/// One validated run: problem instance, scheme, Bregman parameters, loop
/// bounds, and trace persistence options.
struct RunConfig {
    ProblemConfig problem;
    MethodConfig method;
    BregmanParams params;
    long max_iters = 100000;
    double delta = 1e-9;
    long trace_stride = 1;
    std::string output_path; ///< empty: caller decides where the trace goes

    /// Cross-field rules: llgvi <=> wahba, ltvi/htvi <=> quartic,
    /// mode direct <=> p_ring == p. Throws ConfigError.
    void validate() const;
};

/// Per-iteration record. tau is k*h exactly; step_physical is the upcoming
/// physical step h*g(t); orth_err present iff the run lives on SO(3).
struct TraceRow {
    long iter = 0;
    double tau = 0.0;
    double t = 0.0;
    double f_err = 0.0;
    double grad_norm = 0.0;
    double step_physical = 0.0;
    std::optional<double> orth_err;
};

struct Trace {
    std::vector<TraceRow> rows;
    bool so3 = false;
};

enum class TraceFormat { Csv, Json };

struct RunResult {
    Trace trace;
    bool converged = false;
    long iterations = 0; ///< iterations executed (first k meeting the criteria)
    double final_f_err = 0.0;
    double wall_seconds = 0.0; ///< reported, never part of any acceptance threshold
};

/// Termination test |f_k - f_star| < delta and |f_k - f_{k-1}| < delta,
/// both strict.
[[nodiscard]] bool check_termination(double f_k, double f_km1, double f_star, double delta);

/// Parses and fully validates a JSON run configuration, filling documented
/// defaults (t0 = 1, c = 1, trace_stride = 1, delta = 1e-9, max_iters = 1e5).
/// Unknown keys are rejected. Throws ConfigError with a field-level message.
[[nodiscard]] RunConfig parse_config(const std::string& text);

/// Parses {"runs": [...]} into a list of run configurations.
[[nodiscard]] std::vector<RunConfig> parse_compare_config(const std::string& text);

/// Iterates the configured stepper from the default start (q = 0 or R = I,
/// zero momentum) until termination, max_iters, or a stepper error, recording
/// every trace_stride-th iterate plus the final one. StepTooLarge/NonFinite
/// are rethrown with the failing iteration index.
[[nodiscard]] RunResult run_trajectory(const RunConfig& cfg);

struct RunSummary {
    std::string label;
    bool converged = false;
    long iterations = 0;
    double final_f_err = 0.0;
    double wall_seconds = 0.0;
};

struct ComparisonReport {
    std::vector<RunSummary> summaries;
    std::vector<Trace> traces;
};

/// Runs >= 2 configurations on one problem instance and collects aligned
/// traces plus per-run summaries. Throws MismatchedProblemError when the
/// configs disagree on the problem instance.
[[nodiscard]] ComparisonReport compare_runs(const std::vector<RunConfig>& cfgs);

/// CSV schema exactly `iter,tau,t,f_err,grad_norm,step_physical,orth_err`
/// (orth_err empty for vector runs); 17 significant digits throughout.
void write_trace(const Trace& trace, const std::string& path, TraceFormat format);

/// Serializes without touching the filesystem (stdout mode of the CLI).
[[nodiscard]] std::string format_trace(const Trace& trace, TraceFormat format);

/// Reads back a CSV trace written by write_trace.
[[nodiscard]] Trace read_trace_csv(const std::string& path);

/// Plain-text data matrix: 3 lines of 3 comma-separated decimals.
[[nodiscard]] Mat3 read_wahba_matrix(const std::string& path);

/// Resolves the configured problem's data matrix (seed or file).
[[nodiscard]] Mat3 wahba_matrix_for(const ProblemConfig& problem);

} // namespace tavi
