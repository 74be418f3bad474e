#include "xsess/preprocess.hpp"

#include <json.hpp>

namespace xsess {

std::string PreprocessReport::to_json() const {
  nlohmann::json j;
  j["removed_item_labels"] = removed_item_labels;
  j["removed_purchase_rows"] = removed_purchase_rows;
  j["dropped_purchase_events"] = dropped_purchase_events;
  j["removed_section_labels"] = removed_section_labels;
  j["removed_object_labels"] = removed_object_labels;
  j["removed_type_labels"] = removed_type_labels;
  j["removed_actions_rare"] = removed_actions_rare;
  j["deduped_actions"] = deduped_actions;
  j["dropped_sessions"] = dropped_sessions;
  j["truncated_sessions"] = truncated_sessions;
  j["removed_actions_truncated"] = removed_actions_truncated;
  return j.dump(2);
}

Dataset filter_rare(const Dataset& ds, const PreprocessConfig& cfg, PreprocessReport& report) {
  if (!(cfg.min_freq > 0.0 && cfg.min_freq < 1.0)) {
    fail("filter_rare: min_freq must lie in (0, 1)");
  }
  const auto& v = ds.vocab;

  // Frequencies over the reference (training) portion only.
  std::vector<long> item_count(static_cast<std::size_t>(v.catalog_size()), 0);
  long n_events = 0;
  for (const auto& p : ds.purchases) {
    if (p.timestamp > cfg.frequency_cutoff) continue;
    ++n_events;
    for (int k : p.items) ++item_count[static_cast<std::size_t>(k)];
  }
  std::vector<long> section_count(static_cast<std::size_t>(v.sections.size()), 0);
  std::vector<long> object_count(static_cast<std::size_t>(v.objects.size()), 0);
  std::vector<long> type_count(static_cast<std::size_t>(v.action_types.size()), 0);
  long n_actions = 0;
  for (const auto& s : ds.sessions) {
    if (s.start_time() > cfg.frequency_cutoff) continue;
    for (const auto& a : s.actions) {
      ++n_actions;
      ++section_count[static_cast<std::size_t>(a.section)];
      ++object_count[static_cast<std::size_t>(a.object)];
      ++type_count[static_cast<std::size_t>(a.type)];
    }
  }

  auto rare = [&](long count, long total) {
    return total > 0 && static_cast<double>(count) < cfg.min_freq * static_cast<double>(total);
  };
  std::vector<bool> item_rare(item_count.size());
  for (std::size_t i = 0; i < item_count.size(); ++i) {
    item_rare[i] = rare(item_count[i], n_events);
    if (item_rare[i]) ++report.removed_item_labels;
  }
  std::vector<bool> section_rare(section_count.size());
  std::vector<bool> object_rare(object_count.size());
  std::vector<bool> type_rare(type_count.size());
  for (std::size_t i = 0; i < section_count.size(); ++i) {
    section_rare[i] = rare(section_count[i], n_actions);
    if (section_rare[i]) ++report.removed_section_labels;
  }
  for (std::size_t i = 0; i < object_count.size(); ++i) {
    object_rare[i] = rare(object_count[i], n_actions);
    if (object_rare[i]) ++report.removed_object_labels;
  }
  for (std::size_t i = 0; i < type_count.size(); ++i) {
    type_rare[i] = rare(type_count[i], n_actions);
    if (type_rare[i]) ++report.removed_type_labels;
  }

  Dataset out;
  out.vocab = ds.vocab;  // dimensions are stable; rare labels simply stop occurring
  out.users = ds.users;
  out.rebuild_user_index();

  for (const auto& p : ds.purchases) {
    PurchaseEvent ev;
    ev.user_id = p.user_id;
    ev.timestamp = p.timestamp;
    for (int k : p.items) {
      if (item_rare[static_cast<std::size_t>(k)]) {
        ++report.removed_purchase_rows;
      } else {
        ev.items.push_back(k);
      }
    }
    if (ev.items.empty()) {
      ++report.dropped_purchase_events;
    } else {
      out.purchases.push_back(std::move(ev));
    }
  }

  for (const auto& s : ds.sessions) {
    Session ns;
    ns.user_id = s.user_id;
    ns.session_id = s.session_id;
    for (const auto& a : s.actions) {
      if (section_rare[static_cast<std::size_t>(a.section)] ||
          object_rare[static_cast<std::size_t>(a.object)] ||
          type_rare[static_cast<std::size_t>(a.type)]) {
        ++report.removed_actions_rare;
      } else {
        ns.actions.push_back(a);
      }
    }
    if (!ns.actions.empty()) out.sessions.push_back(std::move(ns));
    // Sessions emptied here are counted by the length rule via dropped input,
    // not silently: an empty session never reaches stage 3.
  }
  return out;
}

Session dedupe_consecutive(const Session& s, PreprocessReport& report) {
  Session out;
  out.user_id = s.user_id;
  out.session_id = s.session_id;
  for (const auto& a : s.actions) {
    if (!out.actions.empty() && out.actions.back().same_tuple(a)) {
      ++report.deduped_actions;
    } else {
      out.actions.push_back(a);
    }
  }
  return out;
}

std::vector<Session> drop_short_truncate(const std::vector<Session>& sessions, int min_actions,
                                         int max_actions, PreprocessReport& report) {
  if (min_actions > max_actions) fail("drop_short_truncate: min_actions > max_actions");
  std::vector<Session> out;
  out.reserve(sessions.size());
  for (const auto& s : sessions) {
    const int n = static_cast<int>(s.actions.size());
    if (n < min_actions) {
      ++report.dropped_sessions;
      continue;
    }
    Session ns = s;
    if (n > max_actions) {
      report.removed_actions_truncated += n - max_actions;
      ++report.truncated_sessions;
      ns.actions.resize(static_cast<std::size_t>(max_actions));
    }
    out.push_back(std::move(ns));
  }
  return out;
}

Dataset preprocess(const Dataset& ds, const PreprocessConfig& cfg, PreprocessReport& report) {
  Dataset out = filter_rare(ds, cfg, report);
  for (auto& s : out.sessions) s = dedupe_consecutive(s, report);
  out.sessions = drop_short_truncate(out.sessions, cfg.min_actions, cfg.max_actions, report);
  return out;
}

}  // namespace xsess
