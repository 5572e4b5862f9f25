#include "ludilite/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace ludilite {

std::vector<std::string> rouge_tokens(std::string_view text) {
  std::string padded;
  padded.reserve(text.size() * 2);
  for (char c : text) {
    if (c == '(' || c == ')' || c == '{' || c == '}') {
      padded += ' ';
      padded += c;
      padded += ' ';
    } else {
      padded += c;
    }
  }
  std::istringstream in(padded);
  std::vector<std::string> tokens;
  for (std::string token; in >> token;) tokens.push_back(std::move(token));
  return tokens;
}

double rouge_l_f1(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  // Two-row LCS table.
  std::vector<std::size_t> prev(reference.size() + 1, 0);
  std::vector<std::size_t> curr(reference.size() + 1, 0);
  for (const std::string& c : candidate) {
    for (std::size_t j = 1; j <= reference.size(); ++j) {
      curr[j] = c == reference[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  const double lcs = static_cast<double>(prev.back());
  if (lcs == 0.0) return 0.0;
  const double precision = lcs / static_cast<double>(candidate.size());
  const double recall = lcs / static_cast<double>(reference.size());
  return 2.0 * precision * recall / (precision + recall);
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_distance: length mismatch");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  const double cosine = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
  return 0.5 * (1.0 - cosine);
}

namespace {

std::vector<double> comparable(const ConceptVector& v, std::size_t items) {
  std::vector<double> out = v.items();
  out.resize(items);
  out.insert(out.end(), v.extended.begin(), v.extended.end());
  return out;
}

}  // namespace

double concept_distance(const ConceptVector& a, const ConceptVector& b) {
  const std::size_t items = std::min(a.item_count(), b.item_count());
  const std::vector<double> va = comparable(a, items);
  const std::vector<double> vb = comparable(b, items);
  if (va.size() != vb.size()) return 1.0;
  return cosine_distance(va, vb);
}

double ncd(const PredictedConcepts& pred, const ConceptVector& gt) {
  if (pred.status != PredictedConcepts::Status::kComputed) return 1.0;
  return concept_distance(*pred.concepts, gt);
}

MeanStderr mean_stderr(const std::vector<std::vector<double>>& groups) {
  if (groups.empty()) throw std::invalid_argument("mean_stderr: no groups");
  std::vector<double> means;
  means.reserve(groups.size());
  for (const auto& group : groups) {
    if (group.empty()) throw std::invalid_argument("mean_stderr: empty group");
    means.push_back(std::accumulate(group.begin(), group.end(), 0.0) /
                    static_cast<double>(group.size()));
  }
  const double k = static_cast<double>(means.size());
  MeanStderr out;
  out.mean = std::accumulate(means.begin(), means.end(), 0.0) / k;
  if (means.size() > 1) {
    double sq = 0.0;
    for (double m : means) sq += (m - out.mean) * (m - out.mean);
    out.standard_error = std::sqrt(sq / (k - 1.0)) / std::sqrt(k);
  }
  return out;
}

namespace {

MetricSummary summarize(const std::vector<const InstanceRow*>& rows,
                        const std::vector<std::string>& seeds) {
  std::vector<std::vector<double>> comp, func, rouge, dist;
  std::set<std::string> ids;
  for (const std::string& seed : seeds) {
    std::vector<double> c, f, r, d;
    for (const InstanceRow* row : rows) {
      if (row->seed != seed) continue;
      c.push_back(row->compilable ? 100.0 : 0.0);
      f.push_back(row->functional ? 100.0 : 0.0);
      r.push_back(100.0 * row->rouge_l);
      d.push_back(row->ncd);
      ids.insert(row->id);
    }
    if (c.empty()) continue;
    comp.push_back(std::move(c));
    func.push_back(std::move(f));
    rouge.push_back(std::move(r));
    dist.push_back(std::move(d));
  }
  MetricSummary summary;
  if (comp.empty()) return summary;
  summary.compilability = mean_stderr(comp);
  summary.functionality = mean_stderr(func);
  summary.rouge_l = mean_stderr(rouge);
  summary.ncd = mean_stderr(dist);
  summary.instances = static_cast<int>(ids.size());
  summary.seed_groups = static_cast<int>(comp.size());
  return summary;
}

double mean_pair_distance(const std::vector<std::pair<std::string, const ConceptVector*>>& a,
                          const std::vector<std::pair<std::string, const ConceptVector*>>& b) {
  double total = 0.0;
  std::size_t pairs = 0;
  for (const auto& [id_a, va] : a) {
    for (const auto& [id_b, vb] : b) {
      if (id_a == id_b) continue;
      total += concept_distance(*va, *vb);
      ++pairs;
    }
  }
  return pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
}

}  // namespace

EvalReport evaluate_corpus(std::span<const Instance> instances,
                           std::span<const Prediction> predictions, const Grammar& grammar,
                           const RewardConfig& cfg) {
  cfg.validate();
  std::map<std::string, const Instance*> by_id;
  for (const Instance& instance : instances) {
    if (!by_id.emplace(instance.id, &instance).second) {
      throw EvalError("duplicate instance id '" + instance.id + "'");
    }
  }
  std::set<std::string> seed_set;
  std::map<std::pair<std::string, std::string>, const Prediction*> lookup;
  for (const Prediction& p : predictions) {
    if (!by_id.count(p.id)) throw EvalError("prediction references unknown instance id '" + p.id + "'");
    seed_set.insert(p.seed);
    lookup[{p.id, p.seed}] = &p;
  }
  if (seed_set.empty()) throw EvalError("no predictions to evaluate");
  const std::vector<std::string> seeds(seed_set.begin(), seed_set.end());

  EvalReport report;
  report.config = cfg;

  std::map<std::string, ConceptVector> truth;
  for (const auto& [id, instance] : by_id) {
    try {
      truth.emplace(id, compute_reference(instance->description, cfg).concepts);
    } catch (const ReferenceError& e) {
      throw EvalError("ground truth of '" + id + "' is unusable: " + e.what());
    }
  }

  for (const auto& [id, instance] : by_id) {
    const std::vector<std::string> reference_tokens = rouge_tokens(instance->description);
    for (const std::string& seed : seeds) {
      InstanceRow row;
      row.id = id;
      row.seed = seed;
      row.category = instance->category;
      auto it = lookup.find({id, seed});
      if (it != lookup.end()) {
        const std::string& candidate = it->second->candidate;
        row.predicted = true;
        row.r_g = grammar_reward(grammar, candidate);
        row.rouge_l = rouge_l_f1(rouge_tokens(candidate), reference_tokens);
        const CandidateAnalysis analysis = analyze_candidate(candidate, cfg);
        row.compilable = analysis.compilable;
        row.functional = analysis.functionality.functional;
        row.ncd = ncd(analysis.concepts, truth.at(id));
      }
      report.rows.push_back(std::move(row));
    }
  }

  std::vector<const InstanceRow*> all;
  std::map<std::string, std::vector<const InstanceRow*>> per_category;
  for (const InstanceRow& row : report.rows) {
    all.push_back(&row);
    if (row.category) per_category[*row.category].push_back(&row);
  }
  report.overall = summarize(all, seeds);
  for (const auto& [category, rows] : per_category) {
    report.by_category[category] = summarize(rows, seeds);
  }

  std::map<std::string, std::vector<std::pair<std::string, const ConceptVector*>>> members;
  for (const auto& [id, instance] : by_id) {
    if (instance->category) members[*instance->category].emplace_back(id, &truth.at(id));
  }
  if (!members.empty()) {
    // Ties go to the lexicographically first category.
    auto largest = std::max_element(members.begin(), members.end(), [](const auto& x, const auto& y) {
      return x.second.size() < y.second.size();
    });
    report.largest_category = largest->first;
    for (const auto& [category, list] : members) {
      report.category_distances[category] = mean_pair_distance(largest->second, list);
    }
  }
  return report;
}

double category_concept_distance(std::span<const Instance> a, std::span<const Instance> b,
                                 const RewardConfig& cfg) {
  std::unordered_map<std::string, ConceptVector> cache;
  const auto concepts_of = [&](const Instance& instance) -> const ConceptVector& {
    auto it = cache.find(instance.id);
    if (it != cache.end()) return it->second;
    try {
      return cache.emplace(instance.id, compute_reference(instance.description, cfg).concepts)
          .first->second;
    } catch (const ReferenceError& e) {
      throw EvalError("instance '" + instance.id + "' is not functional: " + e.what());
    }
  };
  std::vector<std::pair<std::string, const ConceptVector*>> va, vb;
  for (const Instance& i : a) va.emplace_back(i.id, nullptr);
  for (const Instance& i : b) vb.emplace_back(i.id, nullptr);
  for (std::size_t i = 0; i < a.size(); ++i) concepts_of(a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) concepts_of(b[i]);
  for (auto& [id, ptr] : va) ptr = &cache.at(id);
  for (auto& [id, ptr] : vb) ptr = &cache.at(id);
  return mean_pair_distance(va, vb);
}

}  // namespace ludilite
