#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tabletop/graspeval/evaluate.hpp"

namespace tabletop::analytics {

// Simulation as classifier, real outcome as ground truth.
struct ConfusionMatrix {
  std::size_t tn = 0;  // sim 0, real 0
  std::size_t fp = 0;  // sim 1, real 0
  std::size_t fn = 0;  // sim 0, real 1
  std::size_t tp = 0;  // sim 1, real 1

  std::size_t total() const { return tn + fp + fn + tp; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// Counts records carrying a real label. Throws NoPairedRecords when none do.
ConfusionMatrix confusion_matrix(const std::vector<graspeval::TrialRecord>& records);
std::size_t count_unpaired(const std::vector<graspeval::TrialRecord>& records);

// Percentages in hundredths of a percent, rounded half-up with integer
// arithmetic (21/31 -> 6774). Throw UndefinedMetric on a zero denominator.
std::int64_t precision_hundredths(const ConfusionMatrix& cm);
std::int64_t recall_hundredths(const ConfusionMatrix& cm);

double precision(const ConfusionMatrix& cm);  // percent
double recall(const ConfusionMatrix& cm);     // percent

// "70.00%"
std::string format_percent(std::int64_t hundredths);

}  // namespace tabletop::analytics
