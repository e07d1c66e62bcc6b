/**
 * @file conventions.hpp
 * @brief Global sign conventions, fixed once and asserted by tests.
 *
 * The flat-model action of the symmetry algebra involves two sign choices
 * that no identity pins down individually: the direction of the
 * one-parameter flow defining fundamental vector fields, and the matching
 * sign of the induced action on sections. With both set to +1,
 *
 *   X_{e_i} = d_i,  L_{e_i} f = d_i f,
 *   [X_h, X_h'] = -X_{[h,h']},  [L_h, L_h'] = -L_{[h,h']},
 *
 * i.e. both maps are anti-homomorphisms, the standard outcome for a left
 * action differentiated along t -> exp(t h). The bracket tests
 * (test_flat_quantizer.cpp) certify the table below; changing either sign
 * flips the corresponding bracket convention coherently.
 */
#pragma once

namespace iffquant::conventions {

inline constexpr int fundamental_field_sign = 1;
inline constexpr int section_action_sign = 1;

/// [X_h, X_h'] = bracket_sign * X_[h,h'] under the signs above.
inline constexpr int fundamental_bracket_sign = -1;
inline constexpr int section_bracket_sign = -1;

} // namespace iffquant::conventions
