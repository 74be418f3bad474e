#include "xsess/sessionize/tasks.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace xsess {

using nlohmann::json;

std::vector<TaskInstance> assemble_tasks(const Dataset& ds, double threshold_seconds,
                                         int max_sessions, AssembleReport& report) {
  if (!(threshold_seconds > 0.0)) fail("assemble_tasks: threshold must be positive");
  if (max_sessions < 1) fail("assemble_tasks: max_sessions must be >= 1");

  // Session indices per user, already sorted by start time in the dataset.
  std::unordered_map<std::string, std::vector<int>> by_user;
  for (std::size_t i = 0; i < ds.sessions.size(); ++i) {
    by_user[ds.sessions[i].user_id].push_back(static_cast<int>(i));
  }

  std::vector<TaskInstance> tasks;
  for (const auto& p : ds.purchases) {
    auto it = by_user.find(p.user_id);
    std::vector<int> kept;
    if (it != by_user.end()) {
      const auto& idx = it->second;
      // Last session strictly before the purchase.
      int j = static_cast<int>(idx.size()) - 1;
      while (j >= 0 && ds.sessions[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])]
                               .start_time() >= p.timestamp) {
        --j;
      }
      Timestamp prev_start = 0;
      for (; j >= 0; --j) {
        const Session& s = ds.sessions[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        if (!kept.empty() &&
            static_cast<double>(prev_start - s.start_time()) > threshold_seconds) {
          break;  // chain broken
        }
        kept.push_back(idx[static_cast<std::size_t>(j)]);
        prev_start = s.start_time();
        if (static_cast<int>(kept.size()) == max_sessions) {
          // Only a truncation if an in-threshold session would have followed.
          if (j > 0) {
            const Session& next =
                ds.sessions[static_cast<std::size_t>(idx[static_cast<std::size_t>(j - 1)])];
            if (static_cast<double>(prev_start - next.start_time()) <= threshold_seconds) {
              ++report.truncated_tasks;
            }
          }
          break;
        }
      }
    }
    if (kept.empty()) {
      ++report.skipped_no_sessions;
      continue;
    }
    std::reverse(kept.begin(), kept.end());

    TaskInstance t;
    t.user_id = p.user_id;
    for (int si : kept) t.sessions.push_back(ds.sessions[static_cast<std::size_t>(si)]);
    t.purchase_time = p.timestamp;
    t.target = Vector::Zero(ds.vocab.catalog_size());
    for (int k : p.items) t.target[k] = 1.0;
    const UserRecord& u = ds.user(p.user_id);
    t.portfolio = u.portfolio;
    t.demographics = u.demographics;
    tasks.push_back(std::move(t));
    ++report.tasks;
  }
  return tasks;
}

namespace {

json vocab_to_json(const Vocabulary& v) {
  json j;
  j["sections"] = v.sections.labels();
  j["objects"] = v.objects.labels();
  j["action_types"] = v.action_types.labels();
  j["items"] = v.items.labels();
  j["item_base"] = v.item_base;
  return j;
}

Vocabulary vocab_from_json(const json& j) {
  Vocabulary v;
  for (const auto& s : j.at("sections")) v.sections.add(s.get<std::string>());
  for (const auto& s : j.at("objects")) v.objects.add(s.get<std::string>());
  for (const auto& s : j.at("action_types")) v.action_types.add(s.get<std::string>());
  for (const auto& s : j.at("items")) v.items.add(s.get<std::string>());
  v.item_base = j.at("item_base").get<std::vector<int>>();
  v.frozen = true;
  return v;
}

}  // namespace

void save_tasks(const std::string& path, const Vocabulary& vocab,
                const std::vector<TaskInstance>& tasks) {
  json j;
  j["format"] = "xsess-tasks";
  j["version"] = 1;
  j["vocabulary"] = vocab_to_json(vocab);
  json arr = json::array();
  for (const auto& t : tasks) {
    json jt;
    jt["user_id"] = t.user_id;
    jt["purchase_time"] = t.purchase_time;
    json sessions = json::array();
    for (const auto& s : t.sessions) {
      json js;
      js["session_id"] = s.session_id;
      json actions = json::array();
      for (const auto& a : s.actions) {
        actions.push_back({a.section, a.object, a.type, a.timestamp});
      }
      js["actions"] = std::move(actions);
      sessions.push_back(std::move(js));
    }
    jt["sessions"] = std::move(sessions);
    json items = json::array();
    for (Index k = 0; k < t.target.size(); ++k) {
      if (t.target[k] > 0.5) items.push_back(k);
    }
    jt["items"] = std::move(items);
    jt["portfolio"] = std::vector<int>(t.portfolio.data(), t.portfolio.data() + t.portfolio.size());
    jt["demographics"] =
        std::vector<double>(t.demographics.data(), t.demographics.data() + t.demographics.size());
    arr.push_back(std::move(jt));
  }
  j["tasks"] = std::move(arr);
  std::ofstream out(path);
  if (!out) fail(path + ": cannot open file for writing");
  out << j.dump() << '\n';
}

std::pair<Vocabulary, std::vector<TaskInstance>> load_tasks(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(path + ": invalid JSON: " + e.what());
  }
  if (j.value("format", "") != "xsess-tasks") fail(path + ": not a task file");
  Vocabulary vocab = vocab_from_json(j.at("vocabulary"));
  std::vector<TaskInstance> tasks;
  for (const auto& jt : j.at("tasks")) {
    TaskInstance t;
    t.user_id = jt.at("user_id").get<std::string>();
    t.purchase_time = jt.at("purchase_time").get<Timestamp>();
    for (const auto& js : jt.at("sessions")) {
      Session s;
      s.user_id = t.user_id;
      s.session_id = js.at("session_id").get<std::string>();
      for (const auto& ja : js.at("actions")) {
        Action a;
        a.section = ja.at(0).get<int>();
        a.object = ja.at(1).get<int>();
        a.type = ja.at(2).get<int>();
        a.timestamp = ja.at(3).get<Timestamp>();
        s.actions.push_back(a);
      }
      t.sessions.push_back(std::move(s));
    }
    t.target = Vector::Zero(vocab.catalog_size());
    for (const auto& k : jt.at("items")) t.target[k.get<Index>()] = 1.0;
    const auto portfolio = jt.at("portfolio").get<std::vector<int>>();
    t.portfolio = Eigen::Map<const IntVector>(portfolio.data(), static_cast<Index>(portfolio.size()));
    const auto demo = jt.at("demographics").get<std::vector<double>>();
    t.demographics = Eigen::Map<const Vector>(demo.data(), static_cast<Index>(demo.size()));
    tasks.push_back(std::move(t));
  }
  return {std::move(vocab), std::move(tasks)};
}

}  // namespace xsess
