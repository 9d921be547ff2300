#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "elastica/network.hpp"
#include "elastica/variational.hpp"

namespace elastica {

struct SolverConfig {
    double dt_init = 1e-4;
    double dt_min = 1e-10;
    double dt_max = 1e-2;
    double t_end = 1.0;
    double stop_velocity_tol = 1e-5;
    std::size_t remesh_every = 25;  // 0 disables remeshing
    // Also remesh as soon as max/min node speed on a curve exceeds this ratio. 0 disables.
    double remesh_speed_ratio = 1.1;
    // A remesh is kept only if it changes the energy by at most this fraction.
    double remesh_energy_tol_rel = 1e-4;
    bool energy_backtrack = true;
    std::size_t max_steps = 1'000'000;
    double dt_growth = 1.1;        // applied after a step accepted without halving
    double tol_mono_rel = 1e-8;    // tol_mono = tol_mono_rel * E(0)
    // With backtracking on, a step is also rejected when ||V||_L2 grows by more
    // than this factor (catches explicit-term instabilities that still lower
    // the energy). 0 disables the guard.
    double velocity_growth_limit = 2.0;
    // Explicit lower-order terms limit dt to about cfl / kappa^4, where kappa is
    // the largest of |k| and |d_s log|dx gamma|| over all nodes. 0 disables.
    double stability_cfl = 0.02;
    std::size_t snapshot_every = 0;  // 0 keeps only the first and last states
    bool stop_on_monitor = false;

    // Throws BadParams unless 0 < dt_min <= dt_init <= dt_max and tolerances are positive.
    void validate() const;
};

// The network at time t with geometry caches kept in sync with the positions.
struct FlowState {
    double t{};
    NetworkSpec network;
    std::vector<GeometryCache> caches;
    double dt_next{};
    std::size_t accepted_steps{};
    std::size_t steps_since_remesh{};
    double reference_energy{};  // E(0), scales tol_mono

    // Checks the structure and builds the caches.
    [[nodiscard]] static FlowState initial(NetworkSpec network, double dt = 1e-4);
    void refresh();
    [[nodiscard]] double energy() const;
    [[nodiscard]] EnergyReport energy_report() const;
};

struct BoundFlags {
    bool length_below_lower{};
    bool length_above_upper{};
    bool junction_degenerate{};  // non-degeneracy measure under 0.1

    [[nodiscard]] bool any() const noexcept { return length_below_lower || length_above_upper || junction_degenerate; }
};

struct StepReport {
    double t_before{};
    double dt_used{};
    double energy_before{};
    double energy_after{};  // after the flow step, before any remesh
    double remesh_energy_change{};  // E(remeshed) - energy_after; 0 without a remesh
    double bending_after{};
    double dissipation_lhs{};  // (energy_after - energy_before) / dt
    double dissipation_rhs{};  // -int V^2 ds at t_before
    double linear_residual{};  // of the accepted solve
    double velocity_l2_after{};
    std::size_t halvings{};
    bool remeshed{};
    BoundFlags bound_flags;
    std::vector<double> lengths_after;

    [[nodiscard]] double t_after() const noexcept { return t_before + dt_used; }
};

// Assembled semi-implicit step over all curves. Unknown (curve c, node i,
// component d) lives at offsets[c] + 2 i + d.
struct LinearSystem {
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> sizes;
};

struct LinearSolution {
    std::vector<std::vector<Vec2>> points;
    double residual{};  // ||A x - b||_inf / (||A||_inf ||x||_inf + ||b||_inf)
};

// Tangential speed used in the explicit part for one curve: the special-flow
// T_bar for networks without junctions, otherwise a linear blend between the
// end values (junction solve at junction ends, zero at fixed ends).
[[nodiscard]] std::vector<double> tangential_velocity(const FlowState& state, std::size_t curve);

// Rows: phi_i + dt c_i D4 phi_i = gamma_i + dt (f_i + c_i D4 gamma_i) with
// c_i = 2 / |dx gamma_i|^4 and f the explicit velocity; boundary rows replace
// the two outermost nodes of each open end.
[[nodiscard]] LinearSystem assemble_step_system(const FlowState& state, double dt);

// Sparse LU. Throws SingularSystem if the factorization fails or the normwise
// backward error exceeds 1e-9.
[[nodiscard]] LinearSolution solve_linear(const LinearSystem& system);

// cfl / kappa^4 for the state (infinite for straight, uniformly sampled curves).
[[nodiscard]] double stability_dt_limit(const FlowState& state, double cfl);

struct StepResult {
    FlowState state;
    StepReport report;
};

[[nodiscard]] StepResult step(const FlowState& state, const SolverConfig& config);

enum class RunStatus { converged, reached_t_end, max_steps, step_failed, stopped_on_monitor };
[[nodiscard]] std::string status_name(RunStatus s);

struct Trajectory {
    std::vector<FlowState> snapshots;  // initial state first, final state last
    std::vector<StepReport> reports;
    RunStatus status{RunStatus::reached_t_end};
    std::string message;
    double initial_velocity_l2{};
    std::size_t monitor_events{};

    [[nodiscard]] const FlowState& final_state() const { return snapshots.back(); }
};

// Integrates until t_end, convergence (||V||_L2 < stop_velocity_tol, also
// checked on the initial state), max_steps or a StepFailed error (recorded in
// the status, not rethrown). Other errors propagate.
[[nodiscard]] Trajectory run(NetworkSpec initial, const SolverConfig& config);

// Called after every accepted step with the new state and its report.
using StepObserver = std::function<void(const FlowState&, const StepReport&)>;
[[nodiscard]] Trajectory run(NetworkSpec initial, const SolverConfig& config, const StepObserver& observer);

}  // namespace elastica
