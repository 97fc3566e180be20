#pragma once

#include "config.hpp"

#include <semiwave/models.hpp>

#include <optional>
#include <string>

namespace semiwave::cli {

// The scalar problem a preset reduces to, plus the model it came from.
struct BuiltModel {
    std::string preset;
    kernels::Kernel kernel;
    profile::Nonlinearity nl;
    std::optional<models::EpidemicModel> epidemic;
    std::optional<models::PopulationModel> population;
};

kernels::Law1D build_law(const FamilySpec& s);
profile::FFamily build_f(const FamilySpec& s);
profile::GFamily build_g(const FamilySpec& s);
kernels::Kernel build_kernel(const KernelSpec& s);

// Invalid parameter values surface as ConfigError pointing at the field.
BuiltModel build_model(const RunConfig& cfg);

} // namespace semiwave::cli
