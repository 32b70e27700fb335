#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace natlog {

struct ClassCounts {
  int gold = 0;       // examples with this gold label
  int predicted = 0;  // examples assigned this label
  int correct = 0;
};

struct Metrics {
  int total = 0;
  int correct = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::vector<ClassCounts> per_class;
  std::vector<double> precision;  // 0 where undefined
  std::vector<double> recall;
};

// Accuracy plus macroaveraged F1, computed as the harmonic mean of the mean
// precision and mean recall over the classes that occur in the gold labels,
// with precision set to 0 where no prediction of the class exists.
inline Metrics compute_metrics(const std::vector<int>& gold,
                               const std::vector<int>& predicted,
                               int num_classes) {
  if (gold.size() != predicted.size())
    throw std::invalid_argument("gold/prediction size mismatch");
  Metrics m;
  m.total = static_cast<int>(gold.size());
  m.per_class.assign(static_cast<std::size_t>(num_classes), {});
  for (std::size_t i = 0; i < gold.size(); ++i) {
    m.per_class[static_cast<std::size_t>(gold[i])].gold += 1;
    m.per_class[static_cast<std::size_t>(predicted[i])].predicted += 1;
    if (gold[i] == predicted[i]) {
      m.correct += 1;
      m.per_class[static_cast<std::size_t>(gold[i])].correct += 1;
    }
  }
  m.accuracy = m.total ? static_cast<double>(m.correct) / m.total : 0.0;
  m.precision.assign(static_cast<std::size_t>(num_classes), 0.0);
  m.recall.assign(static_cast<std::size_t>(num_classes), 0.0);
  double precision_sum = 0.0;
  double recall_sum = 0.0;
  int present = 0;
  for (int c = 0; c < num_classes; ++c) {
    const ClassCounts& counts = m.per_class[static_cast<std::size_t>(c)];
    if (counts.predicted > 0)
      m.precision[static_cast<std::size_t>(c)] =
          static_cast<double>(counts.correct) / counts.predicted;
    if (counts.gold > 0)
      m.recall[static_cast<std::size_t>(c)] =
          static_cast<double>(counts.correct) / counts.gold;
    if (counts.gold > 0) {
      present += 1;
      precision_sum += m.precision[static_cast<std::size_t>(c)];
      recall_sum += m.recall[static_cast<std::size_t>(c)];
    }
  }
  if (present > 0) {
    const double avg_precision = precision_sum / present;
    const double avg_recall = recall_sum / present;
    m.macro_f1 = (avg_precision + avg_recall) > 0.0
                     ? 2.0 * avg_precision * avg_recall /
                           (avg_precision + avg_recall)
                     : 0.0;
  }
  return m;
}

// Frequency of the most frequent gold class; the floor any constant
// predictor achieves.
inline double majority_class_accuracy(const std::vector<int>& gold,
                                      int num_classes) {
  std::vector<int> counts(static_cast<std::size_t>(num_classes), 0);
  for (const int g : gold) counts[static_cast<std::size_t>(g)] += 1;
  int best = 0;
  for (const int c : counts) best = std::max(best, c);
  return gold.empty() ? 0.0 : static_cast<double>(best) / static_cast<double>(gold.size());
}

}  // namespace natlog
