#pragma once

#include <limits>
#include <string>

#include "xsess/core/data.hpp"

namespace xsess {

// Per-stage audit counts emitted by the cleaning pipeline.
struct PreprocessReport {
  // rare-label filter
  long removed_item_labels = 0;
  long removed_purchase_rows = 0;     // (event, item) pairs dropped
  long dropped_purchase_events = 0;   // events left empty
  long removed_section_labels = 0;
  long removed_object_labels = 0;
  long removed_type_labels = 0;
  long removed_actions_rare = 0;      // actions deleted because a label was rare
  // consecutive-duplicate collapse
  long deduped_actions = 0;
  // length rules
  long dropped_sessions = 0;
  long truncated_sessions = 0;
  long removed_actions_truncated = 0;

  std::string to_json() const;
};

struct PreprocessConfig {
  double min_freq = 0.001;  // strict less-than is removed
  int min_actions = 3;
  int max_actions = 30;
  // Frequencies are counted only over purchases at or before this time and
  // sessions starting at or before it, so the held-out tail cannot influence
  // what gets filtered. Defaults to "use everything".
  Timestamp frequency_cutoff = std::numeric_limits<Timestamp>::max();
};

// Stage 1: drop purchase items and action labels with training frequency
// strictly below min_freq. Item frequency is per purchase event; action
// label frequency is per action. Actions carrying a removed label are
// deleted; events left without items are dropped.
Dataset filter_rare(const Dataset& ds, const PreprocessConfig& cfg, PreprocessReport& report);

// Stage 2: collapse runs of identical (section, object, type) tuples to the
// first occurrence.
Session dedupe_consecutive(const Session& s, PreprocessReport& report);

// Stage 3: drop sessions shorter than min_actions, keep the first
// max_actions of longer ones.
std::vector<Session> drop_short_truncate(const std::vector<Session>& sessions, int min_actions,
                                         int max_actions, PreprocessReport& report);

// Full pipeline in fixed stage order: rare-filter, dedupe, drop/truncate.
Dataset preprocess(const Dataset& ds, const PreprocessConfig& cfg, PreprocessReport& report);

}  // namespace xsess
