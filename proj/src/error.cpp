#include "finsite/error.hpp"

namespace finsite {

const char* errc_name(Errc e) {
    switch (e) {
        case Errc::BadInput: return "BadInput";
        case Errc::EmptyCategory: return "EmptyCategory";
        case Errc::MissingComposite: return "MissingComposite";
        case Errc::NonAssociative: return "NonAssociative";
        case Errc::BadIdentity: return "BadIdentity";
        case Errc::NotCospan: return "NotCospan";
        case Errc::NotALattice: return "NotALattice";
        case Errc::NotDistributive: return "NotDistributive";
        case Errc::CriteriaDisagree: return "CriteriaDisagree";
        case Errc::SizeExceeded: return "SizeExceeded";
        case Errc::WrongCodomain: return "WrongCodomain";
        case Errc::TargetMismatch: return "TargetMismatch";
        case Errc::TransitionEscapesFibre: return "TransitionEscapesFibre";
        case Errc::NotALocale: return "NotALocale";
        case Errc::NotFinitary: return "NotFinitary";
        case Errc::NotCartesianBase: return "NotCartesianBase";
        case Errc::NoLeftAdjoint: return "NoLeftAdjoint";
        case Errc::BeckChevalleyFails: return "BeckChevalleyFails";
        case Errc::FrobeniusFails: return "FrobeniusFails";
        case Errc::NotASheaf: return "NotASheaf";
        case Errc::CertificateFailure: return "CertificateFailure";
        case Errc::TheoremViolation: return "TheoremViolation";
        case Errc::NotPresheafBase: return "NotPresheafBase";
        case Errc::SelfCheckFailed: return "SelfCheckFailed";
    }
    return "UnknownError";
}

}  // namespace finsite
