#pragma once

#include <string>
#include <vector>

#include "mlab/constants.hpp"
#include "mlab/grid.hpp"

namespace mlab {

// The five oscillation functionals of phi = log w, per arc Q:
//   C1    : avg exp(phi - phi_Q)
//   C2(p) : avg exp(-(phi - phi_Q)/(p-1)),  1 < p < inf
//   C3    : phi_Q - min_Q phi
//   C4    : max_Q phi - phi_Q
//   C5(p) : avg exp(p (phi - phi_Q)),       1 < p < inf
enum class OscTag { C1, C2, C3, C4, C5 };

struct OscKind {
    OscTag tag = OscTag::C1;
    double p = 0.0;  // required in (1, inf) for C2 and C5
};

double osc_constant(const Weight& w, OscKind kind, Scope scope);

struct RelationCheck {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;       // rhs - lhs for inequalities, tol - error for equalities
    std::string status;       // "pass" | "fail" | "reported"
};

struct RelationReport {
    double p = 0.0;
    Scope scope = Scope::GridArcs;
    std::vector<RelationCheck> relations;
    bool all_pass = true;
};

// Evaluates the two-sided relations between C1..C5 and the weight-class
// constants at the given p and scope. On the dyadic scope the reverse-Holder
// side uses the sup part only; the dyadic doubling constant is attached as a
// "reported" row.
RelationReport lemma35_crosscheck(const Weight& w, double p, Scope scope);

}  // namespace mlab
