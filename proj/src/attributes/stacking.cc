#include "actrec/attributes/stacking.h"

#include <algorithm>
#include <cmath>

#include "actrec/common/error.h"

namespace actrec::attributes {

namespace {

bool uses_base(StackMode m) {
  return m == StackMode::kBaseContext || m == StackMode::kBaseCooccurrence || m == StackMode::kAll;
}
bool uses_context(StackMode m) {
  return m == StackMode::kContext || m == StackMode::kBaseContext || m == StackMode::kAll;
}
bool uses_cooccurrence(StackMode m) {
  return m == StackMode::kCooccurrence || m == StackMode::kBaseCooccurrence || m == StackMode::kAll;
}

long base_dim_of(const StackSequence& seq, StackMode mode) {
  if (!uses_base(mode)) return 0;
  if (!seq.features) throw ValidationError("stack mode '" + std::string(stack_mode_name(mode)) + "' needs base features");
  if (seq.features->rows() != seq.scores.num_intervals()) {
    throw ValidationError("base feature rows do not match score matrix columns");
  }
  return seq.features->cols();
}

}  // namespace

StackMode parse_stack_mode(std::string_view name) {
  if (name == "context") return StackMode::kContext;
  if (name == "cooccurrence") return StackMode::kCooccurrence;
  if (name == "base+context") return StackMode::kBaseContext;
  if (name == "base+cooccurrence") return StackMode::kBaseCooccurrence;
  if (name == "all") return StackMode::kAll;
  throw ValidationError("unknown stack mode '" + std::string(name) + "'");
}

std::string_view stack_mode_name(StackMode mode) {
  switch (mode) {
    case StackMode::kContext: return "context";
    case StackMode::kCooccurrence: return "cooccurrence";
    case StackMode::kBaseContext: return "base+context";
    case StackMode::kBaseCooccurrence: return "base+cooccurrence";
    case StackMode::kAll: return "all";
  }
  return "?";
}

long stacked_dim(StackMode mode, long base_dim, long n) {
  return (uses_base(mode) ? base_dim : 0) + (uses_context(mode) ? n : 0) + (uses_cooccurrence(mode) ? n - 1 : 0);
}

Eigen::VectorXd stacked_feature(const StackSequence& seq, long t, long i, StackMode mode, double floor) {
  const long n = seq.scores.num_attributes();
  const long base = base_dim_of(seq, mode);
  Eigen::VectorXd out(stacked_dim(mode, base, n));
  long off = 0;
  if (uses_base(mode)) {
    out.segment(off, base) = seq.features->row(t).transpose();
    off += base;
  }
  if (uses_context(mode)) {
    out.segment(off, n) = context_feature(seq.scores.values, t, floor);
    off += n;
  }
  if (uses_cooccurrence(mode)) {
    out.segment(off, n - 1) = cooccurrence_feature(seq.scores.values.col(t), i);
  }
  return out;
}

StackedModel train_stacked(const std::vector<StackSequence>& train, StackMode mode, const TrainConfig& config) {
  if (train.empty()) throw ValidationError("stacked training needs at least one sequence");
  const long n = train.front().scores.num_attributes();
  if (uses_cooccurrence(mode) && n < 2) throw ValidationError("co-occurrence features need at least 2 attributes");
  long rows = 0;
  const long base = base_dim_of(train.front(), mode);
  for (const auto& seq : train) {
    seq.scores.validate();
    if (seq.scores.num_attributes() != n) throw ValidationError("training sequences disagree on attribute count");
    if (base_dim_of(seq, mode) != base) throw ValidationError("training sequences disagree on feature dimension");
    if (static_cast<long>(seq.labels.size()) != seq.scores.num_intervals()) {
      throw ValidationError("every training interval needs an attribute label set");
    }
    rows += seq.scores.num_intervals();
  }
  const long dim = stacked_dim(mode, base, n);

  StackedModel model;
  model.mode = mode;
  model.base_dim = base;
  model.models.attributes = train.front().scores.attributes;
  model.models.config = config;
  model.models.dim = dim;
  model.models.models.resize(static_cast<std::size_t>(n));
  model.feature_mean.assign(static_cast<std::size_t>(n), Eigen::VectorXd::Zero(dim));
  model.feature_scale.assign(static_cast<std::size_t>(n), Eigen::VectorXd::Ones(dim));

  Eigen::MatrixXd x(rows, dim);
  std::vector<int> y(static_cast<std::size_t>(rows));
  for (long i = 0; i < n; ++i) {
    long r = 0, pos = 0;
    for (const auto& seq : train) {
      for (long t = 0; t < seq.scores.num_intervals(); ++t, ++r) {
        x.row(r) = stacked_feature(seq, t, i, mode, config.floor).transpose();
        const auto& present = seq.labels[static_cast<std::size_t>(t)];
        y[static_cast<std::size_t>(r)] = std::find(present.begin(), present.end(), i) != present.end() ? 1 : -1;
        pos += y[static_cast<std::size_t>(r)] > 0;
      }
    }
    if (pos == 0 || pos == rows) {
      model.models.skipped.push_back(model.models.attributes[static_cast<std::size_t>(i)]);
      continue;
    }
    // Floor-valued entries dwarf the scores otherwise and stall the solver.
    Eigen::VectorXd mean = x.colwise().mean().transpose();
    Eigen::VectorXd scale(dim);
    for (long c = 0; c < dim; ++c) {
      double sd = std::sqrt((x.col(c).array() - mean[c]).square().mean());
      scale[c] = sd > 1e-12 ? 1.0 / sd : 0.0;
    }
    x = ((x.rowwise() - mean.transpose()).array().rowwise() * scale.transpose().array()).matrix();
    model.feature_mean[static_cast<std::size_t>(i)] = mean;
    model.feature_scale[static_cast<std::size_t>(i)] = scale;
    TrainConfig cfg = config;
    cfg.seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
    model.models.models[static_cast<std::size_t>(i)] = train_linear_binary(x, y, cfg);
  }
  return model;
}

ScoreMatrix score_stacked(const StackedModel& model, const StackSequence& seq) {
  seq.scores.validate();
  const long n = static_cast<long>(model.models.attributes.size());
  if (seq.scores.num_attributes() != n) throw ValidationError("score matrix attribute count mismatch");
  if (base_dim_of(seq, model.mode) != model.base_dim) throw ValidationError("base feature dimension mismatch");
  ScoreMatrix out;
  out.attributes = seq.scores.attributes;
  out.interval_ids = seq.scores.interval_ids;
  out.values.resize(n, seq.scores.num_intervals());
  out.flagged_rows.assign(static_cast<std::size_t>(n), false);
  for (long i = 0; i < n; ++i) {
    const auto& m = model.models.models[static_cast<std::size_t>(i)];
    for (long t = 0; t < seq.scores.num_intervals(); ++t) {
      if (!m) {
        out.values(i, t) = model.models.config.floor;
        continue;
      }
      Eigen::VectorXd f = stacked_feature(seq, t, i, model.mode, model.models.config.floor);
      if (!model.feature_mean.empty()) {
        f = ((f - model.feature_mean[static_cast<std::size_t>(i)]).array() *
             model.feature_scale[static_cast<std::size_t>(i)].array())
                .matrix();
      }
      double raw = m->raw_score(f);
      out.values(i, t) = model.models.config.z_normalize ? m->normalized_score(raw) : raw;
    }
    if (!m) out.flagged_rows[static_cast<std::size_t>(i)] = true;
  }
  return out;
}

std::vector<ScoreMatrix> train_and_score_stacked(const std::vector<StackSequence>& train,
                                                 const std::vector<StackSequence>& eval, StackMode mode,
                                                 const TrainConfig& config) {
  StackedModel model = train_stacked(train, mode, config);
  std::vector<ScoreMatrix> out;
  out.reserve(eval.size());
  for (const auto& seq : eval) out.push_back(score_stacked(model, seq));
  return out;
}

}  // namespace actrec::attributes
