#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "elastica/network.hpp"
#include "elastica/solver.hpp"

namespace elastica {

enum class CurveClass { closed, open, network };

// Relative slack on both bounds so that a curve sitting exactly on a bound
// (the straight segment) is not flagged from roundoff.
inline constexpr double kLengthBoundSlack = 1e-9;

struct LengthBounds {
    double lower{};
    double upper{std::numeric_limits<double>::infinity()};

    [[nodiscard]] bool below(double length) const noexcept { return length < lower * (1.0 - kLengthBoundSlack); }
    [[nodiscard]] bool above(double length) const noexcept { return length > upper * (1.0 + kLengthBoundSlack); }
};

// closed:  lower = 4 pi^2 / E0
// open:    lower = |P - Q|, or pi^2 / E0 when P == Q
// network: no lower bound; upper = E0 / mu_min for every class (infinite when mu_min == 0)
[[nodiscard]] LengthBounds length_bounds(double E0, std::span<const double> mu, CurveClass cls,
                                         Vec2 P = {}, Vec2 Q = {});

// Bounds for the monitored length of a network: the curve length for single
// curves, the total length for networks.
[[nodiscard]] LengthBounds length_bounds(const NetworkSpec& initial, double E0);
[[nodiscard]] double monitored_length(const NetworkSpec& spec);

inline constexpr double kDissipationFloor = 1e-12;

// |dE/dt + int V^2 ds| / max(int V^2 ds, floor) for one step.
[[nodiscard]] double dissipation_residual(const StepReport& report);
[[nodiscard]] std::vector<double> dissipation_residual(std::span<const StepReport> reports);

// sqrt( sum over curves of sum_i V_i^2 ds_i ).
[[nodiscard]] double stationarity(const SampledCurve& curve, double mu);
[[nodiscard]] double stationarity(const NetworkSpec& spec);
[[nodiscard]] double stationarity(std::span<const GeometryCache> caches, std::span<const double> mu);

enum class LimitKind { circle, figure_eight, other };

struct LimitClass {
    LimitKind kind{LimitKind::other};
    double radius{};
    int winding{};
    bool heuristic{};  // set for figure_eight

    [[nodiscard]] std::string describe() const;
};

inline constexpr double kDefaultStationarityThreshold = 1e-3;

// round( (1 / 2 pi) * int k ds ).
[[nodiscard]] int winding_number(const GeometryCache& geom);

// Throws NotStationary when ||V||_L2 exceeds the threshold, BadParams for open curves.
[[nodiscard]] LimitClass classify_limit(const SampledCurve& curve, double mu,
                                        double stationarity_threshold = kDefaultStationarityThreshold);

struct MonitorRecord {
    double t{};
    double energy{};
    std::vector<double> lengths;
    double velocity_l2{};
    LengthBounds bounds;
    bool violated{};
    std::vector<double> nondegeneracy;  // one per junction
};

struct MonitorReport {
    std::vector<MonitorRecord> records;

    [[nodiscard]] std::size_t violations() const noexcept;
};

// Monitor records for every snapshot of a trajectory, bounds from its first state.
[[nodiscard]] MonitorReport monitor(const Trajectory& trajectory);
[[nodiscard]] MonitorRecord monitor_state(const FlowState& state, const LengthBounds& bounds);

[[nodiscard]] std::vector<double> junction_nondegeneracy(const FlowState& state);

}  // namespace elastica
