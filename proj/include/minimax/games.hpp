#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "minimax/game.hpp"

namespace minimax {

// f(x, y) = x'By, g = -f. The canonical cycling example.
GamePtr bilinear_game(DenseMatrix b);

// f = 1/2 x'Axx x + x'By + 1/2 y'Ayy y + bx'x + by'y, g = -f, so the
// second-derivative blocks are D2xx f = Axx, D2xy f = B, D2yy f = Ayy.
// Rejects non-symmetric Axx / Ayy.
GamePtr quadratic_game(DenseMatrix a_xx, DenseMatrix a_yy, DenseMatrix b,
                       Vec b_x = {}, Vec b_y = {});

// Scalar convenience: m = n = 1 with blocks (a_xx, a_yy, b).
GamePtr quadratic_game_1d(double a_xx, double a_yy, double b, double b_x = 0.0,
                          double b_y = 0.0);

// 1-D GAN caricature: f(theta, psi) = softplus(theta * psi), g = -f,
// unique equilibrium at the origin.
GamePtr dirac_gan_game();

struct MlpGanConfig {
  std::uint64_t seed = 1;
  int hidden = 8;
  std::vector<std::array<double, 2>> modes = {{1.0, 1.0}, {-1.0, -1.0}};
  int batch = 64;           // real samples and latents per (fixed) batch
  double mode_sigma = 0.05; // spread of each Gaussian mode
  enum class GenLoss { kZeroSum, kNonSaturating };
  GenLoss gen_loss = GenLoss::kZeroSum;
};

// Tiny dense GAN: generator 2 -> hidden -> 2 and discriminator
// 2 -> hidden -> 1, tanh activations, logistic losses. Player x owns the
// discriminator (f = BCE-with-logits objective), player y the generator.
// Derivatives come from the reverse-mode tape; the data batch and latents are
// drawn once at construction from the seed, so evaluations are pure.
GamePtr mlp_gan_game(const MlpGanConfig& config);

}  // namespace minimax
