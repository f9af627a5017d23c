#pragma once

#include <stdexcept>

namespace renyi {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A set descriptor does not resolve against the space it was used with.
struct ResolutionError : Error { using Error::Error; };

// Conditioning on an event of mass zero.
struct NullEventError : Error { using Error::Error; };

// Conditioning on an event of infinite mass; use disintegration instead.
struct NonNormalizableError : Error { using Error::Error; };

// Laws with disjoint supports cannot be compared for proportionality.
struct IncomparableError : Error { using Error::Error; };

// Chain order, mass bounds or coverage failed for a bunch.
struct InvalidBunchError : Error { using Error::Error; };

// Rejected extended-mass arithmetic such as 0 * infinity.
struct MassArithmeticError : Error { using Error::Error; };

// Posterior requested at a data value with zero pushforward mass.
struct UndefinedPosteriorError : Error { using Error::Error; };

// The model-times-prior recipe needs a sigma-finite prior.
struct RecipeUnavailableError : Error { using Error::Error; };

// Moment-style summaries are refused on improper laws.
struct ImproperLawError : Error { using Error::Error; };

// Malformed run or model configuration.
struct ConfigError : Error { using Error::Error; };

}  // namespace renyi
