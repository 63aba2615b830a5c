#pragma once

#include <stdexcept>
#include <string>

namespace bose2d {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Scattering / potential errors
struct DivergentTail : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };
struct HardCoreNotL1 : Error { using Error::Error; };
struct BadShellRadius : Error { using Error::Error; };

// Transform / quadrature errors
struct NotIntegrable : Error { using Error::Error; };
struct SlowDecay : Error { using Error::Error; };

// Bogoliubov errors
struct ZeroMomentum : Error { using Error::Error; };
struct Unstable : Error { using Error::Error; };
struct HypothesisViolated : Error {
    double offending_k;
    HypothesisViolated(const std::string& what, double k)
        : Error(what), offending_k(k) {}
};

// Ledger / lattice errors
struct RelationViolated : Error { using Error::Error; };
struct CostCap : Error { using Error::Error; };

// Energy errors
struct DensityTooHigh : Error { using Error::Error; };

} // namespace bose2d
