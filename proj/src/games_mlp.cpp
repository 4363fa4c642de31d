#include <cmath>
#include <stdexcept>
#include <utility>

#include "minimax/games.hpp"
#include "minimax/tape.hpp"

// Desk-scale GAN on a 2-D Gaussian mixture. Player x is the discriminator
// (2 -> hidden -> 1), player y the generator (2 -> hidden -> 2), both tanh.
// f is the BCE-with-logits discriminator objective written with softplus:
//   f = mean softplus(-D(real)) + mean softplus(D(G(z)))
// and the generator descends g = -f (zero-sum) or the non-saturating
// mean softplus(-D(G(z))). Every derivative comes off the reverse-mode tape;
// second derivatives are double-backward (gradient of <grad, direction>).

namespace minimax {
namespace {

using Id = Tape::Id;

class MlpGanGame final : public GameOracle {
 public:
  explicit MlpGanGame(const MlpGanConfig& cfg) : cfg_(cfg) {
    if (cfg_.hidden < 2)
      throw std::invalid_argument("mlp_gan_game: hidden must be >= 2");
    if (cfg_.modes.empty())
      throw std::invalid_argument("mlp_gan_game: need at least one data mode");
    if (cfg_.batch < 1)
      throw std::invalid_argument("mlp_gan_game: batch must be >= 1");
    const int h = cfg_.hidden;
    m_ = 4 * h + 1;  // W1 (h x 2), b1, w2, b2
    n_ = 5 * h + 2;  // V1 (h x 2), c1, V2 (2 x h), c2

    // Fixed batch: real points cycle through the modes, latents are standard
    // normal. Drawn once, so the oracle is a pure function of the point.
    NormalSampler rng(cfg_.seed);
    real_.resize(cfg_.batch);
    for (int i = 0; i < cfg_.batch; ++i) {
      const auto& mode = cfg_.modes[i % cfg_.modes.size()];
      real_[i] = {mode[0] + cfg_.mode_sigma * rng.next(),
                  mode[1] + cfg_.mode_sigma * rng.next()};
    }
    latent_.resize(cfg_.batch);
    for (auto& z : latent_) z = {rng.next(), rng.next()};
  }

  std::string_view name() const override { return "mlp"; }
  std::size_t dim_x() const override { return m_; }
  std::size_t dim_y() const override { return n_; }
  bool is_zero_sum() const override {
    return cfg_.gen_loss == MlpGanConfig::GenLoss::kZeroSum;
  }

  double loss_x(const JointPoint& p) const override {
    Graph gr = build(p);
    return gr.tape.value(gr.f);
  }
  double loss_y(const JointPoint& p) const override {
    Graph gr = build(p);
    return gr.tape.value(gr.g);
  }

  Vec grad_x(const JointPoint& p) const override {
    Graph gr = build(p);
    return gr.tape.gradient(gr.f, gr.x_ids);
  }
  Vec grad_y(const JointPoint& p) const override {
    Graph gr = build(p);
    return gr.tape.gradient(gr.g, gr.y_ids);
  }

  Vec hvp_xx(const JointPoint& p, std::span<const double> v) const override {
    return hvp(p, /*of_g=*/false, /*grad_wrt_x=*/true, /*out_wrt_x=*/true, v);
  }
  Vec hvp_yy(const JointPoint& p, std::span<const double> v) const override {
    return hvp(p, /*of_g=*/true, /*grad_wrt_x=*/false, /*out_wrt_x=*/false, v);
  }
  Vec hvp_xy(const JointPoint& p, std::span<const double> v) const override {
    // D2xy f . v = grad_x <grad_y f, v>
    return hvp(p, /*of_g=*/false, /*grad_wrt_x=*/false, /*out_wrt_x=*/true, v);
  }
  Vec hvp_yx(const JointPoint& p, std::span<const double> v) const override {
    // D2yx f . v = grad_y <grad_x f, v>
    return hvp(p, /*of_g=*/false, /*grad_wrt_x=*/true, /*out_wrt_x=*/false, v);
  }

  JointPoint initial_point(std::uint64_t seed) const override {
    NormalSampler rng(seed);
    const int h = cfg_.hidden;
    JointPoint p{Vec(m_), Vec(n_)};
    // fan-in scaled normals, biases zero
    std::size_t k = 0;
    const double s_in = 1.0 / std::sqrt(2.0);
    const double s_h = 1.0 / std::sqrt(static_cast<double>(h));
    for (int i = 0; i < 2 * h; ++i) p.x[k++] = s_in * rng.next();  // W1
    for (int i = 0; i < h; ++i) p.x[k++] = 0.0;                    // b1
    for (int i = 0; i < h; ++i) p.x[k++] = s_h * rng.next();       // w2
    p.x[k++] = 0.0;                                                // b2
    k = 0;
    for (int i = 0; i < 2 * h; ++i) p.y[k++] = s_in * rng.next();  // V1
    for (int i = 0; i < h; ++i) p.y[k++] = 0.0;                    // c1
    for (int i = 0; i < 2 * h; ++i) p.y[k++] = s_h * rng.next();   // V2
    for (int i = 0; i < 2; ++i) p.y[k++] = 0.0;                    // c2
    return p;
  }

 private:
  struct Graph {
    Tape tape;
    std::vector<Id> x_ids, y_ids;
    Id f = -1, g = -1;
  };

  // Discriminator logit for a 2-D input given as tape nodes.
  static Id disc_forward(Tape& t, std::span<const Id> xp, int h, Id a0, Id a1) {
    // xp layout: W1 (h x 2), b1 (h), w2 (h), b2
    Id logit = xp[4 * h];  // b2
    for (int i = 0; i < h; ++i) {
      Id pre = t.add(t.add(t.mul(xp[2 * i], a0), t.mul(xp[2 * i + 1], a1)),
                     xp[2 * h + i]);
      logit = t.add(logit, t.mul(xp[3 * h + i], t.tanh(pre)));
    }
    return logit;
  }

  // Generator sample for a 2-D latent.
  static std::pair<Id, Id> gen_forward(Tape& t, std::span<const Id> yp, int h,
                                       Id z0, Id z1) {
    // yp layout: V1 (h x 2), c1 (h), V2 (2 x h), c2 (2)
    std::vector<Id> u(h);
    for (int i = 0; i < h; ++i) {
      Id pre = t.add(t.add(t.mul(yp[2 * i], z0), t.mul(yp[2 * i + 1], z1)),
                     yp[2 * h + i]);
      u[i] = t.tanh(pre);
    }
    Id o0 = yp[3 * h + 2 * h];      // c2[0]
    Id o1 = yp[3 * h + 2 * h + 1];  // c2[1]
    for (int i = 0; i < h; ++i) {
      o0 = t.add(o0, t.mul(yp[3 * h + i], u[i]));
      o1 = t.add(o1, t.mul(yp[3 * h + h + i], u[i]));
    }
    return {o0, o1};
  }

  Graph build(const JointPoint& p) const {
    check_point(p);
    Graph gr;
    Tape& t = gr.tape;
    gr.x_ids.reserve(m_);
    gr.y_ids.reserve(n_);
    for (double v : p.x) gr.x_ids.push_back(t.input(v));
    for (double v : p.y) gr.y_ids.push_back(t.input(v));

    const int h = cfg_.hidden;
    const Id inv_batch = t.constant(1.0 / cfg_.batch);

    Id real_sum = -1;
    for (const auto& r : real_) {
      Id logit = disc_forward(t, gr.x_ids, h, t.constant(r[0]), t.constant(r[1]));
      Id term = t.softplus(t.neg(logit));
      real_sum = real_sum < 0 ? term : t.add(real_sum, term);
    }

    Id fake_sum = -1;
    Id gen_sum = -1;  // non-saturating generator loss accumulator
    for (const auto& z : latent_) {
      auto [a0, a1] = gen_forward(t, gr.y_ids, h, t.constant(z[0]), t.constant(z[1]));
      Id logit = disc_forward(t, gr.x_ids, h, a0, a1);
      Id term = t.softplus(logit);
      fake_sum = fake_sum < 0 ? term : t.add(fake_sum, term);
      if (cfg_.gen_loss == MlpGanConfig::GenLoss::kNonSaturating) {
        Id gterm = t.softplus(t.neg(logit));
        gen_sum = gen_sum < 0 ? gterm : t.add(gen_sum, gterm);
      }
    }

    gr.f = t.add(t.mul(real_sum, inv_batch), t.mul(fake_sum, inv_batch));
    gr.g = cfg_.gen_loss == MlpGanConfig::GenLoss::kZeroSum
               ? t.neg(gr.f)
               : t.mul(gen_sum, inv_batch);
    return gr;
  }

  Vec hvp(const JointPoint& p, bool of_g, bool grad_wrt_x, bool out_wrt_x,
          std::span<const double> v) const {
    if (v.size() != (grad_wrt_x ? m_ : n_))
      throw std::invalid_argument("mlp hvp: direction size mismatch");
    Graph gr = build(p);
    const Id target = of_g ? gr.g : gr.f;
    const auto& grad_ids = grad_wrt_x ? gr.x_ids : gr.y_ids;
    const auto& out_ids = out_wrt_x ? gr.x_ids : gr.y_ids;
    std::vector<Id> gnodes = gr.tape.gradient_nodes(target, grad_ids);
    const Id s = gr.tape.dot_with_constants(gnodes, v);
    return gr.tape.gradient(s, out_ids);
  }

  MlpGanConfig cfg_;
  std::size_t m_ = 0, n_ = 0;
  std::vector<std::array<double, 2>> real_;
  std::vector<std::array<double, 2>> latent_;
};

}  // namespace

GamePtr mlp_gan_game(const MlpGanConfig& config) {
  return std::make_shared<MlpGanGame>(config);
}

}  // namespace minimax
