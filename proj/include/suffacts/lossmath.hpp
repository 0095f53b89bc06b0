#pragma once

// Loss kernels for contrastive training on evidence omissions: mean
// pooling, cosine-minus-temperature similarity, the binary NCE contrastive
// loss, the 1/m-scaled cross-entropy and their sum, each with analytic
// gradients and a central-difference checker.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "suffacts/error.hpp"
#include "suffacts/jsonl.hpp"

namespace suffacts::loss {

using Vector = std::vector<double>;

inline constexpr double kDefaultTau = 1.5;
// Norms below this make the cosine meaningless.
inline constexpr double kMinNorm = 1e-12;

struct LossConfig {
  double tau = kDefaultTau;
  int label_space_size = 3;
};

enum class Role { Anchor, Positive, Negative };

inline std::string_view role_name(Role r) {
  switch (r) {
    case Role::Anchor: return "ANCHOR";
    case Role::Positive: return "POSITIVE";
    case Role::Negative: return "NEGATIVE";
  }
  return "?";
}

inline Role parse_role(std::string_view s) {
  if (s == "ANCHOR") return Role::Anchor;
  if (s == "POSITIVE") return Role::Positive;
  if (s == "NEGATIVE") return Role::Negative;
  throw ValidationError("unknown embedding role \"" + std::string(s) + "\"");
}

// Last-layer token vectors of one encoded instance, [n_tokens x d].
struct EmbeddingRecord {
  std::string instance_id;
  Role role = Role::Anchor;
  std::vector<Vector> token_vectors;
};

inline void validate(const EmbeddingRecord& rec, const std::string& where) {
  if (rec.token_vectors.empty()) throw ValidationError(where + ": embedding with zero tokens");
  const std::size_t d = rec.token_vectors.front().size();
  if (d == 0) throw ValidationError(where + ": zero-dimensional embedding");
  for (const auto& v : rec.token_vectors) {
    if (v.size() != d) throw ValidationError(where + ": ragged token vectors");
    for (double x : v)
      if (!std::isfinite(x)) throw ValidationError(where + ": non-finite embedding value");
  }
}

inline EmbeddingRecord embedding_from_json(const Json& j, const std::string& where) {
  using namespace suffacts::detail;
  EmbeddingRecord rec;
  rec.instance_id = get_string(j, "instance_id", where);
  rec.role = parse_role(get_string(j, "role", where));
  const Json& vs = field(j, "vectors", where);
  if (!vs.is_array()) throw ValidationError(where + ": vectors must be an array of arrays");
  for (const auto& row : vs) {
    if (!row.is_array()) throw ValidationError(where + ": vectors must be an array of arrays");
    Vector v;
    for (const auto& x : row) {
      if (!x.is_number()) throw ValidationError(where + ": vector entries must be numbers");
      v.push_back(x.get<double>());
    }
    rec.token_vectors.push_back(std::move(v));
  }
  validate(rec, where);
  return rec;
}

inline void to_json(Json& j, const EmbeddingRecord& rec) {
  j = Json{{"instance_id", rec.instance_id}, {"role", role_name(rec.role)}, {"vectors", rec.token_vectors}};
}

inline std::vector<EmbeddingRecord> read_embeddings(const std::string& path) {
  JsonlReader r(path);
  std::vector<EmbeddingRecord> out;
  while (auto j = r.next()) out.push_back(embedding_from_json(*j, suffacts::detail::where(r)));
  return out;
}

// ---------------------------------------------------------------------------
// Scalar helpers.

// log(1 + e^x) without overflow.
inline double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }
inline double log_sigmoid(double x) { return -softplus(-x); }
inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw NumericError(std::string("non-finite ") + what);
}

// ---------------------------------------------------------------------------
// Pooling and similarity.

inline Vector mean_pool(const EmbeddingRecord& rec) {
  if (rec.token_vectors.empty()) throw ValidationError("mean_pool: embedding with zero tokens");
  const std::size_t d = rec.token_vectors.front().size();
  Vector out(d, 0.0);
  for (const auto& v : rec.token_vectors) {
    if (v.size() != d) throw ValidationError("mean_pool: ragged token vectors");
    for (std::size_t i = 0; i < d; ++i) out[i] += v[i];
  }
  const double n = static_cast<double>(rec.token_vectors.size());
  for (double& x : out) x /= n;
  return out;
}

struct CosineGrad {
  double value = 0.0;
  Vector d_a;
  Vector d_b;
};

// cos(a, b) and its gradient with respect to both arguments.
inline CosineGrad cosine_with_grad(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw ValidationError("cosine of vectors with mismatched dimensions");
  const double na = norm(a), nb = norm(b);
  require_finite(na, "vector norm");
  require_finite(nb, "vector norm");
  if (na < kMinNorm || nb < kMinNorm) throw NumericError("cosine similarity of a zero-norm vector");
  CosineGrad g;
  g.value = dot(a, b) / (na * nb);
  g.d_a.resize(a.size());
  g.d_b.resize(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    g.d_a[i] = b[i] / (na * nb) - g.value * a[i] / (na * na);
    g.d_b[i] = a[i] / (na * nb) - g.value * b[i] / (nb * nb);
  }
  return g;
}

// Cosine similarity with the temperature subtracted: cos(a, b) - tau.
inline double similarity(std::span<const double> a, std::span<const double> b, double tau = kDefaultTau) {
  require_finite(tau, "temperature");
  return cosine_with_grad(a, b).value - tau;
}

// ---------------------------------------------------------------------------
// Contrastive loss.

struct ContrastiveResult {
  double loss = 0.0;
  Vector d_anchor;
  Vector d_positive;
  std::vector<Vector> d_negatives;
};

// L = -log sigma(s(a, p)) - sum_k log sigma(1 - s(a, n_k)), s = cos - tau.
// This is the negative log-likelihood of the binary NCE objective, so it is
// non-negative and falls as the positive moves closer to the anchor and the
// negatives move away.
inline ContrastiveResult contrastive_loss(std::span<const double> anchor, std::span<const double> positive,
                                          const std::vector<Vector>& negatives, double tau = kDefaultTau) {
  require_finite(tau, "temperature");
  ContrastiveResult r;
  const auto pos = cosine_with_grad(anchor, positive);
  const double s_pos = pos.value - tau;
  r.loss = -log_sigmoid(s_pos);
  // d/ds [-log sigma(s)] = -sigma(-s)
  const double w_pos = -sigmoid(-s_pos);
  r.d_anchor.assign(anchor.size(), 0.0);
  r.d_positive.assign(positive.size(), 0.0);
  for (std::size_t i = 0; i < anchor.size(); ++i) {
    r.d_anchor[i] += w_pos * pos.d_a[i];
    r.d_positive[i] = w_pos * pos.d_b[i];
  }
  for (const auto& n : negatives) {
    const auto neg = cosine_with_grad(anchor, n);
    const double u = 1.0 - (neg.value - tau);
    r.loss -= log_sigmoid(u);
    // d/ds [-log sigma(1 - s)] = sigma(-(1 - s))
    const double w_neg = sigmoid(-u);
    Vector dn(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
      r.d_anchor[i] += w_neg * neg.d_a[i];
      dn[i] = w_neg * neg.d_b[i];
    }
    r.d_negatives.push_back(std::move(dn));
  }
  require_finite(r.loss, "contrastive loss");
  return r;
}

// ---------------------------------------------------------------------------
// Cross-entropy, with the 1/m scaling over the label space.

inline void check_gold(std::size_t size, std::size_t gold, int m) {
  if (m < 2) throw ValidationError("label space size must be at least 2");
  if (size != static_cast<std::size_t>(m)) throw ValidationError("prediction vector size differs from label space size");
  if (gold >= size) throw ValidationError("gold label index outside the label space");
}

// -(1/m) log probs[gold] for a one-hot gold label.
inline double cross_entropy(std::span<const double> probs, std::size_t gold, int m) {
  check_gold(probs.size(), gold, m);
  if (!(probs[gold] > 0.0)) throw NumericError("cross-entropy is infinite: zero probability on the gold label");
  return -std::log(probs[gold]) / m;
}

// Gradient of cross_entropy with respect to the probability vector.
inline Vector cross_entropy_grad(std::span<const double> probs, std::size_t gold, int m) {
  check_gold(probs.size(), gold, m);
  if (!(probs[gold] > 0.0)) throw NumericError("cross-entropy is infinite: zero probability on the gold label");
  Vector g(probs.size(), 0.0);
  g[gold] = -1.0 / (m * probs[gold]);
  return g;
}

inline Vector softmax(std::span<const double> logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  Vector p(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) z += (p[i] = std::exp(logits[i] - mx));
  for (double& x : p) x /= z;
  return p;
}

struct CrossEntropyResult {
  double loss = 0.0;
  Vector d_logits;
};

// Cross-entropy of softmax(logits); the gradient is (softmax - onehot) / m.
inline CrossEntropyResult cross_entropy_from_logits(std::span<const double> logits, std::size_t gold, int m) {
  check_gold(logits.size(), gold, m);
  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - mx);
  CrossEntropyResult r;
  r.loss = (std::log(z) + mx - logits[gold]) / m;
  r.d_logits = softmax(logits);
  r.d_logits[gold] -= 1.0;
  for (double& x : r.d_logits) x /= m;
  require_finite(r.loss, "cross-entropy");
  return r;
}

// Supervised plus contrastive loss; the contrastive term is skipped for
// NEI-class anchors.
inline double joint_loss(double ce, double cl, bool anchor_is_nei = false) {
  require_finite(ce, "cross-entropy term");
  require_finite(cl, "contrastive term");
  return anchor_is_nei ? ce : ce + cl;
}

// ---------------------------------------------------------------------------
// Gradient checking.

struct LossAndGrad {
  double loss = 0.0;
  std::vector<Vector> grads;  // one per input, same shapes
};

using DifferentiableLoss = std::function<LossAndGrad(const std::vector<Vector>&)>;

// Relative error |a - n| / max(|a|, |n|), with the denominator floored so
// that exactly-zero gradient coordinates compare absolutely.
inline constexpr double kRelErrorFloor = 1e-8;

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), kRelErrorFloor});
}

// Central finite differences on every coordinate of every input; returns the
// largest relative error against the analytic gradient.
inline double grad_check(const DifferentiableLoss& fn, std::vector<Vector> inputs, double epsilon) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) throw ValidationError("grad_check epsilon must lie in [1e-7, 1e-3]");
  const LossAndGrad base = fn(inputs);
  if (base.grads.size() != inputs.size()) throw ValidationError("grad_check: gradient count differs from input count");
  double worst = 0.0;
  for (std::size_t v = 0; v < inputs.size(); ++v) {
    if (base.grads[v].size() != inputs[v].size()) throw ValidationError("grad_check: gradient shape mismatch");
    for (std::size_t i = 0; i < inputs[v].size(); ++i) {
      const double orig = inputs[v][i];
      inputs[v][i] = orig + epsilon;
      const double up = fn(inputs).loss;
      inputs[v][i] = orig - epsilon;
      const double down = fn(inputs).loss;
      inputs[v][i] = orig;
      if (!std::isfinite(up) || !std::isfinite(down)) throw NumericError("grad_check: non-finite loss under perturbation");
      const double numeric = (up - down) / (2.0 * epsilon);
      worst = std::max(worst, relative_error(base.grads[v][i], numeric));
    }
  }
  return worst;
}

// Wraps contrastive_loss for grad_check: inputs are anchor, positive, negatives...
inline DifferentiableLoss contrastive_objective(double tau) {
  return [tau](const std::vector<Vector>& in) {
    std::vector<Vector> negs(in.begin() + 2, in.end());
    auto r = contrastive_loss(in[0], in[1], negs, tau);
    LossAndGrad out{r.loss, {std::move(r.d_anchor), std::move(r.d_positive)}};
    for (auto& d : r.d_negatives) out.grads.push_back(std::move(d));
    return out;
  };
}

inline DifferentiableLoss cross_entropy_logit_objective(std::size_t gold, int m) {
  return [gold, m](const std::vector<Vector>& in) {
    auto r = cross_entropy_from_logits(in[0], gold, m);
    return LossAndGrad{r.loss, {std::move(r.d_logits)}};
  };
}

inline DifferentiableLoss cross_entropy_prob_objective(std::size_t gold, int m) {
  return [gold, m](const std::vector<Vector>& in) {
    return LossAndGrad{cross_entropy(in[0], gold, m), {cross_entropy_grad(in[0], gold, m)}};
  };
}

struct GradCheckReport {
  double max_rel_error = 0.0;
  int trials = 0;
};

// Random trials over both kernels: Gaussian d-dimensional anchor, positive
// and 1-4 negatives for the contrastive loss; Gaussian logits and a random
// probability vector for the cross-entropy, with m drawn from {2, 3}.
inline GradCheckReport random_grad_trials(std::size_t dim, int trials, double epsilon, double tau, std::uint64_t seed) {
  if (dim < 1) throw ValidationError("dimension must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> n_neg(1, 4);
  std::uniform_int_distribution<int> label_space(2, 3);
  auto random_vector = [&](std::size_t d) {
    Vector v(d);
    for (double& x : v) x = gauss(rng);
    return v;
  };
  GradCheckReport rep;
  for (int t = 0; t < trials; ++t) {
    std::vector<Vector> in{random_vector(dim), random_vector(dim)};
    const int k = n_neg(rng);
    for (int i = 0; i < k; ++i) in.push_back(random_vector(dim));
    rep.max_rel_error = std::max(rep.max_rel_error, grad_check(contrastive_objective(tau), in, epsilon));

    const int m = label_space(rng);
    const std::size_t gold = std::uniform_int_distribution<std::size_t>(0, static_cast<std::size_t>(m) - 1)(rng);
    auto logits = random_vector(static_cast<std::size_t>(m));
    rep.max_rel_error = std::max(rep.max_rel_error, grad_check(cross_entropy_logit_objective(gold, m), {logits}, epsilon));
    rep.max_rel_error =
        std::max(rep.max_rel_error, grad_check(cross_entropy_prob_objective(gold, m), {softmax(logits)}, epsilon));
    ++rep.trials;
  }
  return rep;
}

}  // namespace suffacts::loss
