#pragma once

#include "satlab/engine.hpp"

namespace satlab {

/// Hasse diagram of Sub(G) in DOT form; byte-stable for fixed inputs.
/// Strict edges of `ts` (when given) are drawn as a distinguished edge class;
/// with `u` given, node labels carry |R_H(U)| as well.
std::string export_dot(const Context& ctx, const TransferSystem* ts = nullptr,
                       const CharSet* u = nullptr);

}  // namespace satlab
