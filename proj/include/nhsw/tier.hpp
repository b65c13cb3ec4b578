#pragma once

#include <string>

namespace nhsw {

/// Model hierarchy: hydrostatic viscous Saint-Venant, the two dispersive
/// extensions, and the inviscid frictionless limit of the first extension.
enum class ModelTier { Hydrostatic, NonHydro1, NonHydro2, PeregrineInviscid };

std::string to_string(ModelTier tier);
/// Accepts the enumerator names, case-insensitively.
ModelTier tier_from_string(const std::string& name);

inline bool is_dispersive(ModelTier tier) { return tier != ModelTier::Hydrostatic; }

}  // namespace nhsw
