#pragma once

#include <stdexcept>
#include <string>

namespace finsite {

// Failure vocabulary shared by all modules.  Input errors mean the caller's
// data was malformed; theorem/certificate errors mean a result that is
// mathematically guaranteed failed to verify, which is treated as a defect,
// never swallowed.
enum class Errc {
    BadInput,           // malformed description (unknown ids, duplicates, schema)
    EmptyCategory,      // categories must own at least one object
    MissingComposite,   // composable pair absent from the table
    NonAssociative,     // witness triple violates associativity
    BadIdentity,        // identity row/column misbehaves
    NotCospan,          // pullback request on morphisms with distinct codomains
    NotALattice,        // poset lacks a meet or join
    NotDistributive,    // witness triple violates distributivity
    CriteriaDisagree,   // equivalent test criteria returned different verdicts
    SizeExceeded,       // enumeration overflowed a configured cap
    WrongCodomain,      // sieve generator family with mixed targets
    TargetMismatch,     // sieve pullback along a morphism into a different target
    TransitionEscapesFibre,  // restriction left the designated sublattice
    NotALocale,         // internal lattice lacks locale structure
    NotFinitary,        // operation requires a finitary/pointwise-proper input
    NotCartesianBase,   // construction requires a cartesian base site
    NoLeftAdjoint,      // no least y with x <= f*(y)
    BeckChevalleyFails, // adjoint squares disagree on a witness element
    FrobeniusFails,     // Frobenius identity fails on a witness pair
    NotASheaf,          // internal lattice is not a sheaf for the base topology
    CertificateFailure, // a locale/cover certificate did not verify
    TheoremViolation,   // a theorem-backed identity failed on concrete data
    NotPresheafBase,    // construction requires the trivial topology on the base
    SelfCheckFailed,    // internal cross-check (two routes to one value) diverged
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
public:
    Error(Errc kind, const std::string& msg)
        : std::runtime_error(std::string(errc_name(kind)) + ": " + msg), kind_(kind) {}
    Errc kind() const { return kind_; }

private:
    Errc kind_;
};

[[noreturn]] inline void fail(Errc kind, const std::string& msg) { throw Error(kind, msg); }

inline void check(bool ok, Errc kind, const std::string& msg) {
    if (!ok) fail(kind, msg);
}

}  // namespace finsite
