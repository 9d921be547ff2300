#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "elastica/geometry.hpp"

namespace elastica {

enum class CurveEnd { start, end };

// +1 when the curve leaves the junction/endpoint at x = 0, -1 when it arrives at x = 1.
[[nodiscard]] constexpr int orientation_sign(CurveEnd e) noexcept { return e == CurveEnd::start ? 1 : -1; }

struct Periodic {};
struct NavierEndpoint {
    Vec2 point;
};
struct ClampedEndpoint {
    Vec2 point;
    Vec2 tangent;  // unit tangent in the curve's own orientation
};
struct NaturalJunction {
    std::size_t junction{};
};
struct ClampedJunction {
    std::size_t junction{};
    std::vector<double> cosines;  // <tau_j, tau_{j+1}> of consecutive members, outgoing tangents
};

using BoundaryCondition = std::variant<Periodic, NavierEndpoint, ClampedEndpoint, NaturalJunction, ClampedJunction>;
using EndpointCondition = std::variant<NavierEndpoint, ClampedEndpoint>;

[[nodiscard]] std::string bc_name(const BoundaryCondition& bc);

struct JunctionMember {
    std::size_t curve{};
    CurveEnd end{CurveEnd::start};

    [[nodiscard]] int orientation() const noexcept { return orientation_sign(end); }
    friend bool operator==(const JunctionMember&, const JunctionMember&) = default;
};

enum class JunctionKind { natural, clamped };

struct JunctionSpec {
    std::vector<JunctionMember> members;
    JunctionKind kind{JunctionKind::natural};
    std::vector<double> cosines;  // clamped only: m - 1 values for consecutive members

    [[nodiscard]] std::size_t order() const noexcept { return members.size(); }
};

struct EndpointSpec {
    std::size_t curve{};
    CurveEnd end{CurveEnd::start};
    EndpointCondition bc;
};

// Curves, junction table, order-one endpoint table and per-curve weights.
struct NetworkSpec {
    std::vector<SampledCurve> curves;
    std::vector<JunctionSpec> junctions;
    std::vector<EndpointSpec> endpoints;
    std::vector<double> mu;

    [[nodiscard]] std::size_t size() const noexcept { return curves.size(); }
    [[nodiscard]] static NetworkSpec single(SampledCurve curve, double mu);
};

// Tagged condition attached to one end of one curve (Periodic for closed curves).
[[nodiscard]] BoundaryCondition boundary_condition(const NetworkSpec& spec, std::size_t curve, CurveEnd end);

// Throws InvalidNetwork on structural errors: bad ids, ends missing or listed
// twice, wrong mu count, negative mu, non-unit clamped tangents, cosines out
// of [-1, 1], junction order < 2, disconnected supports.
void check_structure(const NetworkSpec& spec);

[[nodiscard]] double network_diameter(const NetworkSpec& spec);

// Solves the cyclic m x m system
//     T_j - <tau_j, tau_{j+1}> T_{j+1} = <nu_{j+1}, tau_j> V_{j+1}    (indices mod m)
// i.e. T_j - cos(a_j) T_{j+1} = -sin(a_j) V_{j+1}, by dense elimination with
// partial pivoting. Throws DegenerateJunction when |det| < 1e-10.
[[nodiscard]] std::vector<double> junction_tangential_solve(std::span<const Vec2> unit_normals,
                                                            std::span<const double> normal_speeds);

// The coefficient matrix of junction_tangential_solve (row-major, m x m) and its determinant.
[[nodiscard]] std::vector<double> junction_matrix(std::span<const Vec2> unit_normals);
[[nodiscard]] double junction_determinant(std::span<const Vec2> unit_normals);

// max_i |sin a_i| over consecutive outgoing tangents sorted counterclockwise.
[[nodiscard]] double nondegeneracy_measure(std::span<const Vec2> outgoing_tangents);

// Counterclockwise order of outgoing tangents (indices into the input).
[[nodiscard]] std::vector<std::size_t> counterclockwise_order(std::span<const Vec2> outgoing_tangents);

struct ValidationTolerances {
    double concurrency_rel = 1e-8;   // times network diameter
    double position_rel = 1e-8;      // fixed endpoints, times diameter
    double angle = 1e-6;             // cosine / tangent gap
    double curvature = 1e-2;         // times 1/diameter
    double third_order = 5e-2;       // times (1/diameter^2 + max mu)
    double velocity = 5e-2;          // times (1/diameter^3 + max mu/diameter)
    double nondegeneracy = 0.1;      // lower threshold on max |sin a|
};

enum class Condition {
    concurrency,
    position,
    angle,
    curvature,
    third_order,
    fixed_endpoint_velocity,
    nondegeneracy,
    sine_relation,
};

[[nodiscard]] std::string condition_name(Condition c);

struct ValidationEntry {
    Condition condition;
    std::string location;  // e.g. "junction 0", "curve 2 end"
    double residual{};
    double tolerance{};
    bool passed{};
    bool experimental{};  // clamped junction conditions
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;

    [[nodiscard]] bool passed() const noexcept;
    [[nodiscard]] std::vector<ValidationEntry> failures() const;
};

// Compatibility and non-degeneracy checks for initial data. Never throws on a
// failed condition; structural errors still raise InvalidNetwork.
[[nodiscard]] ValidationReport validate_admissible(const NetworkSpec& spec, const ValidationTolerances& tol = {});

struct ResidualEntry {
    Condition condition;
    std::string location;
    double value{};
};

// Concurrency, angle, curvature and third-order residuals at every endpoint
// and junction. Closed curves contribute nothing.
[[nodiscard]] std::vector<ResidualEntry> boundary_residuals(const NetworkSpec& spec);

// Per-junction quantities shared by the validator, the residual table and the solver.
struct JunctionGeometry {
    std::vector<Vec2> position;   // member end positions
    std::vector<Vec2> tangent;    // outgoing unit tangents (sigma * tau)
    std::vector<Vec2> nu;         // curve-orientation normals
    std::vector<double> k;        // curve-orientation curvature at the end node
    std::vector<double> ds_k;     // curve-orientation dk/ds at the end node
    std::vector<double> V;        // curve-orientation normal speed at the end node
};

[[nodiscard]] JunctionGeometry junction_geometry(const NetworkSpec& spec, const JunctionSpec& junction,
                                                 std::span<const GeometryCache> caches);

[[nodiscard]] std::size_t end_index(const SampledCurve& curve, CurveEnd end) noexcept;

}  // namespace elastica
