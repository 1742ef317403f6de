#pragma once

#include "localops/choi.hpp"
#include "localops/games.hpp"
#include "localops/layout.hpp"
#include "localops/sep.hpp"

namespace localops {

// Joint channel X -> tr(X) I / d_A over the layout's output space.
KrausChannel completely_noisy(const SystemLayout& layout);

// Two-bit correlated-flip box on two qubit parties: computational inputs
// (x, y) produce the uniform mixture over outputs (a, b) with
// a xor b = x and y, and every input coherence is annihilated.
KrausChannel pr_box();

// Explicit eight-term product decomposition of the box's Choi matrix.
SeparableCertificate pr_box_separable_certificate();

// Joint SWAP of the two qubit inputs; signaling in both directions.
KrausChannel swap_channel();

// Correlated-parity guessing game: uniform two-bit questions, win when the
// answers' parity matches the AND of the question bits.
Game chsh_game();

// (3/16) I minus the game's payoff operator.
ComplexMatrix chsh_witness();

} // namespace localops
