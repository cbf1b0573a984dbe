#pragma once

#include "culift/cu_morphism.hpp"
#include "culift/fd_lift.hpp"
#include "culift/unitary_field.hpp"

#include <string>
#include <vector>

namespace culift {

/// Piecewise-linear rational function on a metric graph, continuous along
/// edges (vertex values stored for isolated vertices and cross-checks).
struct PLFunction {
    struct EdgeFn {
        std::vector<Rat> cuts;
        std::vector<Rat> vals;
    };

    GraphPtr g;
    std::vector<EdgeFn> edges;
    std::vector<Rat> vertex_vals;

    explicit PLFunction(GraphPtr gr);
    PLFunction() = default;

    Rat at(const GraphPoint& p) const;
    PLFunction minus(const PLFunction& o) const;
    PLFunction scaled(const Rat& c) const;
    PLFunction plus(const PLFunction& o) const;

    /// Constancy test; when non-constant, two witness points with their
    /// values are reported.
    bool constant(Rat& value, GraphPoint& x1, GraphPoint& x2, Rat& v1, Rat& v2) const;
};

/// The winding data of a determinant: base = normalized trace of the chosen
/// logarithm, modulus m = the trace lattice (1/m)Z of the block dimension.
struct WindingClass {
    PLFunction base;
    long long modulus = 1;

    /// Stable class equality: bases differ by a constant in (1/m)Z.
    bool stably_equal(const WindingClass& o) const;
    /// Quotient by all constants (the aue-invariant conclusion).
    bool nonstably_equal(const WindingClass& o) const;
};

/// Global continuous logarithm per track: integer offsets per edge glue the
/// stored per-edge lifts into one real-valued function. Errors when a track
/// winds around a cycle (no lift exists).
std::vector<PLFunction> global_lifts(const UnitaryField& u);

/// Determinant of a field through explicit lifts: base = (1/d) sum of the
/// track lifts, modulus d.
WindingClass dhs(const UnitaryField& u, const std::vector<PLFunction>& lifts);
WindingClass dhs(const UnitaryField& u); // lifts computed by propagation

struct ObstructionCertificate {
    enum class Kind { inconclusive, nonconstant_difference, nonlattice_constant };
    Kind kind = Kind::inconclusive;
    GraphPoint x1, x2;
    Rat v1, v2;   // difference values at the witnesses
    Rat constant; // for the non-lattice case

    bool is_certificate() const { return kind != Kind::inconclusive; }
    std::string str() const;
};

/// Equal determinants never prove equivalence; a difference that is not a
/// constant in (1/d)Z proves the fields are not approximately unitarily
/// equivalent.
ObstructionCertificate aue_obstruction(const UnitaryField& u, const UnitaryField& v);

struct CheckLine {
    std::string name;
    std::string claimed;
    std::string computed;
    bool pass = false;
};

struct Report {
    std::string title;
    std::vector<CheckLine> checks;
    bool all_pass() const;
};

// building blocks of the truncation examples
DiagonalUnitary roots_of_unity(int n);          // diag of all 2^n-th roots
GraphPtr unit_interval();
UnitaryField constant_times_w(int n);           // 1 x w_n on [0,1]
UnitaryField rotation_times_w(int n);           // e^{2 pi i t} x w_n on [0,1]

/// The truncation-level obstruction run: Lambda_n closeness of the two
/// fields, the component-count bound, the determinant certificate and the
/// tower bound for the carrier unitaries.
Report obstruction_demo(int n);

/// The Jiang-Su run: measure-based valuations agree at every arc while the
/// determinants distinguish the odd/even classes.
Report jiang_su_demo(int k, int l);

CuZValuation jiang_su_valuation(int k, int res);
Rat jiang_su_determinant(int k); // [k/2] mod 1, exact

} // namespace culift
