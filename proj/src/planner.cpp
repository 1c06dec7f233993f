#include "follower/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace follower::planner {

std::array<double, 4> FeatureScaler::apply(const PlannerInput& in) const {
  std::array<double, 4> f = in.features();
  for (int i = 0; i < 4; ++i) f[i] = (f[i] - mean[i]) / std[i];
  return f;
}

FeatureScaler fit_scaler(const DemoDataset& ds,
                         std::vector<int>* constant_features) {
  if (ds.rows.empty()) throw std::invalid_argument("fit_scaler: empty dataset");
  double n = static_cast<double>(ds.rows.size());
  std::array<double, 4> sum{};
  std::array<double, 4> sq{};
  for (const DemoRow& r : ds.rows) {
    auto f = r.input.features();
    for (int i = 0; i < 4; ++i) sum[i] += f[i];
  }
  FeatureScaler sc;
  for (int i = 0; i < 4; ++i) sc.mean[i] = sum[i] / n;
  for (const DemoRow& r : ds.rows) {
    auto f = r.input.features();
    for (int i = 0; i < 4; ++i) {
      double d = f[i] - sc.mean[i];
      sq[i] += d * d;
    }
  }
  if (constant_features) constant_features->clear();
  for (int i = 0; i < 4; ++i) {
    sc.std[i] = std::sqrt(sq[i] / n);
    if (sc.std[i] < 1e-8) {
      sc.std[i] = 1e-8;
      if (constant_features) constant_features->push_back(i);
    }
  }
  return sc;
}

BodyTwist expert_policy(const PlannerInput& in, const ExpertConfig& cfg) {
  double x_err = (in.x_angle - 160.0) / 160.0;
  double w = -cfg.k_img * x_err;
  double near = std::min(in.left_cm, in.right_cm);
  if (near < 80.0) {
    double push = 100.0 / std::max(in.left_cm, 10.0) -
                  100.0 / std::max(in.right_cm, 10.0);
    w -= cfg.k_obs * push;
  }
  double v;
  if (in.proximity >= 0.5) {
    v = 0.0;
  } else {
    double open_frac = std::clamp((near - 20.0) / (60.0 - 20.0), 0.0, 1.0);
    v = cfg.v_max * open_frac * (1.0 - 0.5 * std::abs(x_err));
  }
  v = std::clamp(v, 0.0, 1.0);
  return {v, w};
}

namespace {

double run_net(const mlp::MlpNetwork& net, const FeatureScaler& sc,
               const PlannerInput& in) {
  auto f = sc.apply(in);
  return mlp::mlp_forward(net, f);
}

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
};

Split make_split(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);
  std::size_t n_train = (n * 8) / 10;
  if (n_train == 0) n_train = n;
  Split s;
  s.train.assign(idx.begin(), idx.begin() + n_train);
  s.val.assign(idx.begin() + n_train, idx.end());
  return s;
}

double eval_loss(const mlp::MlpNetwork& net, const FeatureScaler& sc,
                 const DemoDataset& ds, const std::vector<std::size_t>& idx,
                 TargetKind target, mlp::LossKind loss) {
  if (idx.empty()) return 0.0;
  std::vector<double> preds, targets;
  preds.reserve(idx.size());
  targets.reserve(idx.size());
  for (std::size_t i : idx) {
    preds.push_back(run_net(net, sc, ds.rows[i].input));
    targets.push_back(target == TargetKind::LinearV ? ds.rows[i].v
                                                    : ds.rows[i].w);
  }
  return mlp::compute_loss(preds, targets, loss);
}

}  // namespace

TrainResult train_network(mlp::MlpNetwork net, const DemoDataset& ds,
                          TargetKind target, mlp::LossKind loss, int epochs,
                          int batch_size, std::uint64_t seed) {
  if (ds.rows.size() < 10)
    throw std::invalid_argument("train_network: need at least 10 rows");
  if (epochs < 1 || batch_size < 1)
    throw std::invalid_argument("train_network: bad epochs or batch size");

  Split split = make_split(ds.rows.size(), seed);
  DemoDataset train_rows;
  train_rows.rows.reserve(split.train.size());
  for (std::size_t i : split.train) train_rows.rows.push_back(ds.rows[i]);
  FeatureScaler scaler = fit_scaler(train_rows);

  // batch order rng is separate from the split so the split stays shared
  // between the two heads
  Rng batch_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  mlp::AdamState adam = mlp::make_adam(net);
  mlp::Gradients batch_grad = mlp::make_gradients(net);

  TrainResult out;
  std::vector<std::size_t> order = split.train;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    batch_rng.shuffle(order);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(batch_size)) {
      std::size_t end = std::min(order.size(),
                                 start + static_cast<std::size_t>(batch_size));
      batch_grad.zero();
      for (std::size_t k = start; k < end; ++k) {
        const DemoRow& row = ds.rows[order[k]];
        auto f = scaler.apply(row.input);
        double y = target == TargetKind::LinearV ? row.v : row.w;
        batch_grad.accumulate(mlp::mlp_gradients(net, f, y, loss));
      }
      batch_grad.scale(1.0 / static_cast<double>(end - start));
      mlp::adam_step(adam, net, batch_grad);
    }
    double tl = eval_loss(net, scaler, ds, split.train, target, loss);
    double vl = eval_loss(net, scaler, ds, split.val, target, loss);
    if (!std::isfinite(tl) || !std::isfinite(vl))
      throw std::runtime_error("train_network: loss diverged");
    out.train_loss.push_back(tl);
    out.val_loss.push_back(vl);
  }
  out.net = std::move(net);
  out.scaler = scaler;
  return out;
}

ModelBundle train_bundle(const DemoDataset& ds, int epochs, int batch_size,
                         std::uint64_t seed, std::vector<double>* v_history,
                         std::vector<double>* w_history,
                         std::vector<double>* v_val_history,
                         std::vector<double>* w_val_history) {
  Rng init_rng(seed);
  mlp::MlpNetwork v_net = mlp::make_network(kVNetSizes, init_rng);
  mlp::MlpNetwork w_net = mlp::make_network(kWNetSizes, init_rng);
  TrainResult v = train_network(std::move(v_net), ds, TargetKind::LinearV,
                                mlp::LossKind::MAE, epochs, batch_size, seed);
  TrainResult w = train_network(std::move(w_net), ds, TargetKind::AngularW,
                                mlp::LossKind::MSE, epochs, batch_size, seed);
  if (v_history) *v_history = v.train_loss;
  if (w_history) *w_history = w.train_loss;
  if (v_val_history) *v_val_history = v.val_loss;
  if (w_val_history) *w_val_history = w.val_loss;
  ModelBundle b;
  b.v_net = std::move(v.net);
  b.w_net = std::move(w.net);
  b.scaler = v.scaler;  // identical to w.scaler: same dataset, same seed
  b.seed = seed;
  return b;
}

BundleLosses evaluate_bundle(const ModelBundle& m, const DemoDataset& ds) {
  Split split = make_split(ds.rows.size(), m.seed);
  BundleLosses out;
  out.v_train = eval_loss(m.v_net, m.scaler, ds, split.train,
                          TargetKind::LinearV, mlp::LossKind::MAE);
  out.v_val = eval_loss(m.v_net, m.scaler, ds, split.val, TargetKind::LinearV,
                        mlp::LossKind::MAE);
  out.w_train = eval_loss(m.w_net, m.scaler, ds, split.train,
                          TargetKind::AngularW, mlp::LossKind::MSE);
  out.w_val = eval_loss(m.w_net, m.scaler, ds, split.val,
                        TargetKind::AngularW, mlp::LossKind::MSE);
  return out;
}

PlannerInput resolve_input(const std::optional<vision::Detection>& det,
                           double left_cm, double right_cm,
                           PlannerState& state) {
  PlannerInput in;
  in.left_cm = left_cm;
  in.right_cm = right_cm;
  if (det.has_value()) {
    state.last_x_angle = det->x_angle;
    in.x_angle = det->x_angle;
    in.proximity = det->proximity == vision::Proximity::Close ? 1.0 : 0.0;
  } else {
    in.x_angle = state.last_x_angle;
    in.proximity = 0.0;
  }
  return in;
}

BodyTwist plan_twist(const ModelBundle& model, const PlannerInput& in) {
  if (in.proximity >= 0.5) return {0.0, 0.0};
  double v = run_net(model.v_net, model.scaler, in);
  double w = run_net(model.w_net, model.scaler, in);
  return {std::clamp(v, 0.0, 1.0), w};
}

BodyTwist plan_twist(const ModelBundle& model,
                     const std::optional<vision::Detection>& det,
                     double left_cm, double right_cm, PlannerState& state) {
  return plan_twist(model, resolve_input(det, left_cm, right_cm, state));
}

}  // namespace follower::planner
