#include "tabletop/analytics/confusion.hpp"

#include <cstdio>

#include "tabletop/error.hpp"

namespace tabletop::analytics {
namespace {

std::int64_t ratio_hundredths(std::size_t num, std::size_t den, const char* what) {
  if (den == 0) throw Error(ErrorCode::UndefinedMetric, std::string(what) + " has a zero denominator");
  const auto n = static_cast<std::int64_t>(num);
  const auto d = static_cast<std::int64_t>(den);
  // floor(10000 n / d + 1/2)
  return (20000 * n + d) / (2 * d);
}

}  // namespace

ConfusionMatrix confusion_matrix(const std::vector<graspeval::TrialRecord>& records) {
  ConfusionMatrix cm;
  for (const auto& r : records) {
    if (!r.real_label) continue;
    if (r.sim_label) {
      ++(*r.real_label ? cm.tp : cm.fp);
    } else {
      ++(*r.real_label ? cm.fn : cm.tn);
    }
  }
  if (cm.total() == 0) throw Error(ErrorCode::NoPairedRecords, "no record carries a real label");
  return cm;
}

std::size_t count_unpaired(const std::vector<graspeval::TrialRecord>& records) {
  std::size_t n = 0;
  for (const auto& r : records) n += !r.real_label.has_value();
  return n;
}

std::int64_t precision_hundredths(const ConfusionMatrix& cm) {
  return ratio_hundredths(cm.tp, cm.tp + cm.fp, "precision");
}

std::int64_t recall_hundredths(const ConfusionMatrix& cm) {
  return ratio_hundredths(cm.tp, cm.tp + cm.fn, "recall");
}

double precision(const ConfusionMatrix& cm) { return precision_hundredths(cm) / 100.0; }
double recall(const ConfusionMatrix& cm) { return recall_hundredths(cm) / 100.0; }

std::string format_percent(std::int64_t hundredths) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%02lld%%", static_cast<long long>(hundredths / 100),
                static_cast<long long>(hundredths % 100));
  return buf;
}

}  // namespace tabletop::analytics
