#include "wmsketch/learner.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wmsketch/awm_sketch.hpp"
#include "wmsketch/baselines.hpp"
#include "wmsketch/eval.hpp"
#include "wmsketch/wm_sketch.hpp"

namespace wmsketch {

const char* method_name(Method m) {
  switch (m) {
    case Method::wm: return "wm";
    case Method::awm: return "awm";
    case Method::trunc: return "trunc";
    case Method::ptrunc: return "ptrunc";
    case Method::ss: return "ss";
    case Method::hash: return "hash";
    case Method::dense: return "dense";
    case Method::cmff: return "cmff";
  }
  throw std::invalid_argument("bad method enum");
}

Method method_from_name(std::string_view name) {
  for (Method m : {Method::wm, Method::awm, Method::trunc, Method::ptrunc, Method::ss,
                   Method::hash, Method::dense, Method::cmff}) {
    if (name == method_name(m)) return m;
  }
  throw std::invalid_argument("unknown method: " + std::string(name));
}

OnlineLearner::OnlineLearner(Loss loss, LrSchedule schedule, double lambda)
    : loss_(loss), schedule_(schedule), lambda_(lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw std::invalid_argument("lambda must be finite and nonnegative");
  if (schedule.eta0 * lambda >= 1.0)
    throw std::invalid_argument("eta0 * lambda must be below 1 so decay factors stay positive");
}

double OnlineLearner::decay(double eta) {
  if (lambda_ > 0.0) {
    scale_ *= 1.0 - eta * lambda_;
    if (scale_ < kScaleFloor) {
      rescale(scale_);
      scale_ = 1.0;
    }
  }
  return scale_;
}

namespace {

void check_label(int y) {
  if (y != 1 && y != -1) throw std::invalid_argument("label must be +1 or -1");
}

}  // namespace

void OnlineLearner::update(const SparseVector& x, int y) {
  check_label(y);
  double tau = margin(x);
  double g = loss_.grad(static_cast<double>(y) * tau);
  double eta = schedule_.rate(t_);

  std::vector<feature_t> touched;
  std::vector<SparseVector::Entry> dir;
  touched.reserve(x.size());
  dir.reserve(x.size());
  for (const auto& [id, v] : x) {
    touched.push_back(id);
    dir.emplace_back(id, static_cast<double>(y) * g * v);
  }

  decay(eta);
  apply_step(touched, SparseVector::from_pairs(std::move(dir)), eta);
  ++t_;
}

void OnlineLearner::update_pair(const SparseVector& xa, int ya, const SparseVector& xb, int yb) {
  check_label(ya);
  check_label(yb);
  double ga = loss_.grad(static_cast<double>(ya) * margin(xa));
  double gb = loss_.grad(static_cast<double>(yb) * margin(xb));
  double eta = schedule_.rate(t_);

  std::vector<feature_t> touched;
  touched.reserve(xa.size() + xb.size());
  auto ia = xa.begin();
  auto ib = xb.begin();
  while (ia != xa.end() || ib != xb.end()) {
    if (ib == xb.end() || (ia != xa.end() && ia->first < ib->first)) {
      touched.push_back((ia++)->first);
    } else if (ia == xa.end() || ib->first < ia->first) {
      touched.push_back((ib++)->first);
    } else {
      touched.push_back(ia->first);
      ++ia;
      ++ib;
    }
  }

  std::vector<SparseVector::Entry> dir;
  dir.reserve(xa.size() + xb.size());
  for (const auto& [id, v] : xa) dir.emplace_back(id, static_cast<double>(ya) * ga * v);
  for (const auto& [id, v] : xb) dir.emplace_back(id, static_cast<double>(yb) * gb * v);

  decay(eta);
  apply_step(touched, SparseVector::from_pairs(std::move(dir)), eta);
  ++t_;
}

void OnlineLearner::restore_clock(uint64_t t, double scale) {
  if (!std::isfinite(scale) || scale <= 0.0)
    throw std::invalid_argument("scale must be finite and positive");
  t_ = t;
  scale_ = scale;
}

LearnerSpec resolve_spec(const LearnerSpec& spec) {
  LearnerSpec out = spec;
  if (out.budget_bytes > 0) {
    if (out.width != 0 || out.heap != 0)
      throw std::invalid_argument("give a byte budget or explicit sizes, not both");
    eval::MethodConfig cfg = eval::suggest_config(out.method, out.budget_bytes);
    out.width = cfg.width;
    out.depth = cfg.depth == 0 ? 1 : cfg.depth;
    out.heap = cfg.heap;
    out.budget_bytes = 0;  // consumed; a second resolve passes through
    return out;
  }
  switch (out.method) {
    case Method::wm:
      if (out.width == 0) out.width = 128;
      if (out.heap == 0) out.heap = 128;
      break;
    case Method::awm:
      if (out.width == 0) out.width = 256;
      if (out.heap == 0) out.heap = 128;
      break;
    case Method::trunc:
    case Method::ptrunc:
    case Method::ss:
      if (out.heap == 0) out.heap = 128;
      break;
    case Method::hash:
      if (out.width == 0) out.width = 1024;
      out.depth = 1;
      break;
    case Method::cmff:
      if (out.width == 0) out.width = 256;
      if (out.heap == 0) out.heap = 128;
      if (out.depth < 2) out.depth = 2;
      break;
    case Method::dense:
      break;
  }
  if (out.depth == 0) out.depth = 1;
  return out;
}

std::unique_ptr<OnlineLearner> make_learner(const LearnerSpec& raw) {
  LearnerSpec s = resolve_spec(raw);
  uint64_t k = s.width * s.depth;
  switch (s.method) {
    case Method::wm: {
      WmConfig c{k, s.depth, s.seed, s.lambda, s.loss, s.schedule,
                 static_cast<size_t>(s.heap), s.injective};
      return std::make_unique<WmSketch>(c);
    }
    case Method::awm: {
      AwmConfig c{static_cast<size_t>(s.heap), k, s.depth, s.seed,
                  s.lambda, s.loss, s.schedule, s.injective};
      return std::make_unique<AwmSketch>(c);
    }
    case Method::trunc: {
      TruncConfig c{static_cast<size_t>(s.heap), s.lambda, s.loss, s.schedule};
      return std::make_unique<Truncated>(c);
    }
    case Method::ptrunc: {
      ProbTruncConfig c{static_cast<size_t>(s.heap), s.lambda, s.loss, s.schedule, s.seed};
      return std::make_unique<ProbTruncated>(c);
    }
    case Method::ss: {
      SpaceSavingConfig c{static_cast<size_t>(s.heap), s.lambda, s.loss, s.schedule};
      return std::make_unique<SpaceSaving>(c);
    }
    case Method::hash: {
      FeatureHashingConfig c{s.width, s.seed, s.lambda, s.loss, s.schedule, s.injective};
      return std::make_unique<FeatureHashing>(c);
    }
    case Method::dense: {
      DenseConfig c{s.lambda, s.loss, s.schedule};
      return std::make_unique<DenseModel>(c);
    }
    case Method::cmff: {
      CmFrequentConfig c{static_cast<size_t>(s.heap), k, s.depth, s.seed,
                         s.lambda, s.loss, s.schedule};
      return std::make_unique<CmFrequent>(c);
    }
  }
  throw std::invalid_argument("bad method enum");
}

}  // namespace wmsketch
