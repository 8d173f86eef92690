#include "actrec/harness/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"

namespace actrec::harness {

namespace {

using Rng = std::mt19937_64;

const std::vector<std::string> kFiller{"then", "the", "and", "a", "with", "it", "into", "now", "carefully", "some",
                                       "of", "from", "on", "put", "take", "your"};

long uniform_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Pronounceable unique token of `syllables` consonant-vowel pairs.
std::string pseudo_word(Rng& rng, int syllables, std::set<std::string>& used) {
  static const std::string consonants = "bdfgklmnprstvz";
  static const std::string vowels = "aeiou";
  for (;;) {
    std::string w;
    for (int s = 0; s < syllables; ++s) {
      w += consonants[uniform_int(rng, 0, static_cast<long>(consonants.size()) - 1)];
      w += vowels[uniform_int(rng, 0, static_cast<long>(vowels.size()) - 1)];
    }
    if (used.insert(w).second) return w;
  }
}

// Index drawn proportionally to non-negative weights.
long draw(Rng& rng, const std::vector<double>& weights) {
  return std::discrete_distribution<long>(weights.begin(), weights.end())(rng);
}

double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::vector<std::string> SyntheticConfig::keys() {
  return {"composites", "activities", "objects", "videos_per_composite", "min_intervals", "max_intervals",
          "support_activities", "support_objects", "signal", "noise", "scripts_per_composite", "script_steps",
          "filler_rate", "script_noise", "synonym_rate", "cooccurrence_group", "representation",
          "frames_per_interval", "min_frames", "max_frames", "min_gap", "max_gap", "words_per_attribute",
          "background_words", "word_signal", "train_fraction", "val_fraction", "seed"};
}

void SyntheticConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ValidationError("synthetic config: " + what);
  };
  need(composites >= 1 && activities >= 1 && objects >= 0, "counts must be >= 1");
  need(videos_per_composite >= 3, "videos_per_composite must be >= 3 (train, val and test)");
  need(min_intervals >= 1 && max_intervals >= min_intervals, "interval range is empty");
  need(support_activities >= 1 && support_activities <= activities, "support_activities out of range");
  need(support_objects >= 0 && support_objects <= objects, "support_objects out of range");
  need(min_intervals >= support_activities, "min_intervals must cover every support activity");
  need(noise >= 0 && signal > 0, "noise must be >= 0 and signal > 0");
  need(scripts_per_composite >= 1 && script_steps >= 1, "script counts must be >= 1");
  need(filler_rate >= 0 && filler_rate < 1, "filler_rate must lie in [0, 1)");
  need(script_noise >= 0 && script_noise <= 1 && synonym_rate >= 0 && synonym_rate <= 1, "rates must lie in [0, 1]");
  need(frames_per_interval >= 1 && min_frames >= 1 && max_frames >= min_frames, "frame range is empty");
  need(min_gap >= 0 && max_gap >= min_gap, "gap range is empty");
  need(words_per_attribute >= 1 && background_words >= 1, "word counts must be >= 1");
  need(word_signal >= 0 && word_signal <= 1, "word_signal must lie in [0, 1]");
  need(train_fraction > 0 && val_fraction > 0 && train_fraction + val_fraction < 1, "split fractions invalid");
  if (cooccurrence_group > 0) {
    need(objects == activities * cooccurrence_group, "cooccurrence_group needs objects = activities * group");
    need(support_objects == support_activities * cooccurrence_group,
         "cooccurrence_group needs support_objects = support_activities * group");
    need(cooccurrence_group <= 3, "cooccurrence_group must be <= 3 (at most 3 objects per interval)");
  } else {
    need(3 * min_intervals >= support_objects, "min_intervals too small to show every support object");
  }
  double supports = binomial(activities, support_activities) *
                    (cooccurrence_group > 0 ? 1.0 : binomial(objects, support_objects));
  need(supports >= composites, "sparsity infeasible: fewer distinct supports than composites");
}

SyntheticConfig SyntheticConfig::from_kv(const kv::KeyValues& kv) {
  auto unknown = kv.unknown_keys(keys());
  if (!unknown.empty()) throw ValidationError("synthetic config: unknown key '" + unknown.front() + "'");
  SyntheticConfig c;
  auto i = [&](const char* k, int& v) { v = static_cast<int>(kv.get_int(k, v)); };
  auto d = [&](const char* k, double& v) { v = kv.get_double(k, v); };
  i("composites", c.composites);
  i("activities", c.activities);
  i("objects", c.objects);
  i("videos_per_composite", c.videos_per_composite);
  i("min_intervals", c.min_intervals);
  i("max_intervals", c.max_intervals);
  i("support_activities", c.support_activities);
  i("support_objects", c.support_objects);
  d("signal", c.signal);
  d("noise", c.noise);
  i("scripts_per_composite", c.scripts_per_composite);
  i("script_steps", c.script_steps);
  d("filler_rate", c.filler_rate);
  d("script_noise", c.script_noise);
  d("synonym_rate", c.synonym_rate);
  i("cooccurrence_group", c.cooccurrence_group);
  auto rep = kv.get_string("representation", "scores");
  if (rep == "scores") {
    c.representation = Representation::kScores;
  } else if (rep == "frames") {
    c.representation = Representation::kFrames;
  } else {
    throw ValidationError("synthetic config: representation must be scores or frames");
  }
  i("frames_per_interval", c.frames_per_interval);
  i("min_frames", c.min_frames);
  i("max_frames", c.max_frames);
  i("min_gap", c.min_gap);
  i("max_gap", c.max_gap);
  i("words_per_attribute", c.words_per_attribute);
  i("background_words", c.background_words);
  d("word_signal", c.word_signal);
  d("train_fraction", c.train_fraction);
  d("val_fraction", c.val_fraction);
  c.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<long long>(c.seed)));
  c.validate();
  return c;
}

kv::KeyValues SyntheticConfig::to_kv() const {
  kv::KeyValues kv;
  auto num = [](double v) { return csv::format_exact(v); };
  kv.set("composites", std::to_string(composites));
  kv.set("activities", std::to_string(activities));
  kv.set("objects", std::to_string(objects));
  kv.set("videos_per_composite", std::to_string(videos_per_composite));
  kv.set("min_intervals", std::to_string(min_intervals));
  kv.set("max_intervals", std::to_string(max_intervals));
  kv.set("support_activities", std::to_string(support_activities));
  kv.set("support_objects", std::to_string(support_objects));
  kv.set("signal", num(signal));
  kv.set("noise", num(noise));
  kv.set("scripts_per_composite", std::to_string(scripts_per_composite));
  kv.set("script_steps", std::to_string(script_steps));
  kv.set("filler_rate", num(filler_rate));
  kv.set("script_noise", num(script_noise));
  kv.set("synonym_rate", num(synonym_rate));
  kv.set("cooccurrence_group", std::to_string(cooccurrence_group));
  kv.set("representation", representation == Representation::kScores ? "scores" : "frames");
  kv.set("frames_per_interval", std::to_string(frames_per_interval));
  kv.set("min_frames", std::to_string(min_frames));
  kv.set("max_frames", std::to_string(max_frames));
  kv.set("min_gap", std::to_string(min_gap));
  kv.set("max_gap", std::to_string(max_gap));
  kv.set("words_per_attribute", std::to_string(words_per_attribute));
  kv.set("background_words", std::to_string(background_words));
  kv.set("word_signal", num(word_signal));
  kv.set("train_fraction", num(train_fraction));
  kv.set("val_fraction", num(val_fraction));
  kv.set("seed", std::to_string(seed));
  return kv;
}

Bundle gen_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  Bundle b;
  b.meta = cfg.to_kv();

  // Vocabulary and synonyms.
  std::set<std::string> used(kFiller.begin(), kFiller.end());
  const int n = cfg.activities + cfg.objects;
  for (int a = 0; a < cfg.activities; ++a) b.vocab.add(pseudo_word(rng, 3, used), corpus::AttributeKind::kActivity);
  for (int o = 0; o < cfg.objects; ++o) b.vocab.add(pseudo_word(rng, 3, used), corpus::AttributeKind::kObject);
  std::vector<std::string> synonym(n);
  for (int i = 0; i < n; ++i) {
    synonym[i] = pseudo_word(rng, 4, used);
    b.lexicon.add(b.vocab[i].label, corpus::pos_for_kind(b.vocab[i].kind), {synonym[i]});
  }

  // Planted weights over distinct, equal-size supports.
  std::vector<std::string> comp_ids;
  for (int z = 0; z < cfg.composites; ++z) {
    char id[16];
    std::snprintf(id, sizeof id, "comp%02d", z);
    comp_ids.emplace_back(id);
  }
  b.planted.row_labels = comp_ids;
  b.planted.col_labels = b.vocab.labels();
  b.planted.values = Eigen::MatrixXd::Zero(cfg.composites, n);
  b.planted.normalized = true;
  b.planted.empty_rows.assign(cfg.composites, false);
  std::set<std::vector<int>> supports;
  std::vector<std::vector<int>> support_acts(cfg.composites), support_objs(cfg.composites);
  for (int z = 0; z < cfg.composites; ++z) {
    for (;;) {
      std::vector<int> acts(cfg.activities), objs(cfg.objects);
      std::iota(acts.begin(), acts.end(), 0);
      std::iota(objs.begin(), objs.end(), 0);
      std::shuffle(acts.begin(), acts.end(), rng);
      std::shuffle(objs.begin(), objs.end(), rng);
      acts.resize(cfg.support_activities);
      std::sort(acts.begin(), acts.end());
      if (cfg.cooccurrence_group > 0) {
        objs.clear();
        for (int a : acts) {
          for (int g = 0; g < cfg.cooccurrence_group; ++g) objs.push_back(a * cfg.cooccurrence_group + g);
        }
      } else {
        objs.resize(cfg.support_objects);
        std::sort(objs.begin(), objs.end());
      }
      std::vector<int> key = acts;
      for (int o : objs) key.push_back(cfg.activities + o);
      if (!supports.insert(key).second) continue;
      support_acts[z] = acts;
      support_objs[z] = objs;
      for (int i : key) b.planted.values(z, i) = 0.5 + uniform01(rng);
      b.planted.values.row(z) /= b.planted.values.row(z).sum();
      break;
    }
  }

  // Scripts: steps mention labels in proportion to the planted weights.
  for (int z = 0; z < cfg.composites; ++z) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = b.planted.values(z, i);
    for (int s = 0; s < cfg.scripts_per_composite; ++s) {
      std::vector<std::string> steps;
      for (int k = 0; k < cfg.script_steps; ++k) {
        long i = uniform01(rng) < cfg.script_noise ? uniform_int(rng, 0, n - 1) : draw(rng, w);
        std::string label = uniform01(rng) < cfg.synonym_rate ? synonym[i] : b.vocab[i].label;
        std::vector<std::string> tokens;
        auto filler = [&] {
          for (int f = 0; f < 6 && uniform01(rng) < cfg.filler_rate; ++f) {
            tokens.push_back(kFiller[uniform_int(rng, 0, static_cast<long>(kFiller.size()) - 1)]);
          }
        };
        filler();
        tokens.push_back(label);
        filler();
        std::string step = tokens[0];
        for (std::size_t j = 1; j < tokens.size(); ++j) step += " " + tokens[j];
        steps.push_back(step);
      }
      b.scripts.add_sequence(comp_ids[z], steps);
    }
  }

  // Videos.
  const long words = static_cast<long>(n) * cfg.words_per_attribute + cfg.background_words;
  if (cfg.representation == Representation::kFrames) b.num_words = words;
  for (int z = 0; z < cfg.composites; ++z) {
    std::vector<double> act_w(cfg.activities, 0.0), obj_w(cfg.objects, 0.0);
    for (int a : support_acts[z]) act_w[a] = b.planted.values(z, a);
    for (int o : support_objs[z]) obj_w[o] = b.planted.values(z, cfg.activities + o);

    std::vector<int> order(cfg.videos_per_composite);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const long n_train = std::max(1L, std::lround(cfg.train_fraction * cfg.videos_per_composite));
    const long n_val = std::max(1L, std::lround(cfg.val_fraction * cfg.videos_per_composite));

    for (int v = 0; v < cfg.videos_per_composite; ++v) {
      char vid[32];
      std::snprintf(vid, sizeof vid, "v%02d_%03d", z, v);
      const long t_count = uniform_int(rng, cfg.min_intervals, cfg.max_intervals);

      // Attribute sets: every support activity and object appears at least once.
      std::vector<std::set<int>> present(t_count);
      std::vector<int> acts = support_acts[z];
      std::shuffle(acts.begin(), acts.end(), rng);
      std::vector<int> interval_act(t_count);
      for (long t = 0; t < t_count; ++t) {
        interval_act[t] = t < static_cast<long>(acts.size()) ? acts[t] : static_cast<int>(draw(rng, act_w));
      }
      std::shuffle(interval_act.begin(), interval_act.end(), rng);
      for (long t = 0; t < t_count; ++t) {
        present[t].insert(interval_act[t]);
        if (cfg.cooccurrence_group > 0) {
          for (int g = 0; g < cfg.cooccurrence_group; ++g) {
            present[t].insert(cfg.activities + interval_act[t] * cfg.cooccurrence_group + g);
          }
        } else if (!support_objs[z].empty()) {
          long k = uniform_int(rng, 0, std::min<long>(3, static_cast<long>(support_objs[z].size())));
          std::vector<double> w = obj_w;
          for (long j = 0; j < k; ++j) {
            long o = draw(rng, w);
            w[o] = 0.0;
            present[t].insert(cfg.activities + static_cast<int>(o));
          }
        }
      }
      if (cfg.cooccurrence_group == 0) {
        for (int o : support_objs[z]) {
          int idx = cfg.activities + o;
          bool seen = std::any_of(present.begin(), present.end(), [&](const auto& s) { return s.count(idx) > 0; });
          if (seen) continue;
          std::vector<long> room;
          for (long t = 0; t < t_count; ++t) {
            if (present[t].size() < 4) room.push_back(t);
          }
          present[room[uniform_int(rng, 0, static_cast<long>(room.size()) - 1)]].insert(idx);
        }
      }

      VideoRecord rec{vid, comp_ids[z],
                      order[v] < n_train ? "train" : (order[v] < n_train + n_val ? "val" : "test"), 0};
      std::vector<long> stream;
      attributes::ScoreMatrix scores;
      long frame = 0;
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (long t = 0; t < t_count; ++t) {
        IntervalAnnotation ann;
        ann.video = vid;
        ann.composite = comp_ids[z];
        for (int i : present[t]) ann.attributes.push_back(b.vocab[i].label);
        if (cfg.representation == Representation::kScores) {
          ann.start_frame = frame;
          ann.end_frame = frame + cfg.frames_per_interval - 1;
          frame += cfg.frames_per_interval;
        } else {
          long gap = uniform_int(rng, cfg.min_gap, cfg.max_gap);
          for (long g = 0; g < gap; ++g) {
            stream.push_back(uniform01(rng) < cfg.word_signal
                                 ? n * cfg.words_per_attribute + uniform_int(rng, 0, cfg.background_words - 1)
                                 : uniform_int(rng, 0, words - 1));
          }
          long len = uniform_int(rng, cfg.min_frames, cfg.max_frames);
          ann.start_frame = static_cast<long>(stream.size());
          std::vector<int> pres(present[t].begin(), present[t].end());
          for (long f = 0; f < len; ++f) {
            if (uniform01(rng) < cfg.word_signal) {
              int i = pres[uniform_int(rng, 0, static_cast<long>(pres.size()) - 1)];
              stream.push_back(static_cast<long>(i) * cfg.words_per_attribute +
                               uniform_int(rng, 0, cfg.words_per_attribute - 1));
            } else {
              stream.push_back(uniform_int(rng, 0, words - 1));
            }
          }
          ann.end_frame = static_cast<long>(stream.size()) - 1;
        }
        b.annotations.push_back(std::move(ann));
      }
      if (cfg.representation == Representation::kScores) {
        scores.values.resize(n, t_count);
        for (long t = 0; t < t_count; ++t) {
          for (int i = 0; i < n; ++i) {
            scores.values(i, t) = (present[t].count(i) ? cfg.signal : 0.0) + cfg.noise * gauss(rng);
          }
          scores.interval_ids.push_back(std::to_string(t));
        }
        scores.attributes = b.vocab.labels();
        rec.num_frames = frame;
        b.scores.emplace(vid, std::move(scores));
      } else {
        long gap = uniform_int(rng, cfg.min_gap, cfg.max_gap);
        for (long g = 0; g < gap; ++g) {
          stream.push_back(uniform01(rng) < cfg.word_signal
                               ? n * cfg.words_per_attribute + uniform_int(rng, 0, cfg.background_words - 1)
                               : uniform_int(rng, 0, words - 1));
        }
        rec.num_frames = static_cast<long>(stream.size());
        b.frames.emplace(vid, std::move(stream));
      }
      b.videos.push_back(rec);
    }
  }
  return b;
}

}  // namespace actrec::harness
