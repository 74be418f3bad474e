#include "xsess/core/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "xsess/core/csv.hpp"
#include "xsess/core/time.hpp"

namespace xsess {

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(path + ": invalid JSON: " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(path + ": cannot open file for writing");
  out << j.dump(2) << '\n';
}

int resolve_label(LabelMap& map, const std::string& label, bool frozen,
                  const std::string& where) {
  if (frozen) {
    auto idx = map.find(label);
    if (!idx) fail(where + ": label '" + label + "' not in frozen vocabulary");
    return *idx;
  }
  return map.add(label);
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

SchemaManifest SchemaManifest::load(const std::string& path) {
  const json j = load_json_file(path);
  SchemaManifest m;
  auto get = [&](const json& obj, const char* key, std::string& out) {
    if (obj.contains(key)) out = obj.at(key).get<std::string>();
  };
  if (j.contains("sessions")) {
    const auto& s = j.at("sessions");
    get(s, "user_id", m.sessions.user_id);
    get(s, "session_id", m.sessions.session_id);
    get(s, "timestamp", m.sessions.timestamp);
    get(s, "section", m.sessions.section);
    get(s, "object", m.sessions.object);
    get(s, "type", m.sessions.type);
  }
  if (j.contains("purchases")) {
    const auto& p = j.at("purchases");
    get(p, "user_id", m.purchases.user_id);
    get(p, "timestamp", m.purchases.timestamp);
    get(p, "item", m.purchases.item);
  }
  if (j.contains("users")) {
    const auto& u = j.at("users");
    get(u, "user_id", m.users.user_id);
    get(u, "portfolio_prefix", m.users.portfolio_prefix);
    if (u.contains("demographics")) {
      m.users.demographics = u.at("demographics").get<std::vector<std::string>>();
    }
  }
  if (j.contains("catalog")) {
    for (const auto& e : j.at("catalog")) {
      CatalogEntry entry;
      entry.id = e.at("id").get<std::string>();
      if (e.contains("base") && !e.at("base").is_null()) {
        entry.base = e.at("base").get<std::string>();
      }
      m.catalog.push_back(std::move(entry));
    }
  }
  return m;
}

void SchemaManifest::save(const std::string& path) const {
  json j;
  j["sessions"] = {{"user_id", sessions.user_id},   {"session_id", sessions.session_id},
                   {"timestamp", sessions.timestamp}, {"section", sessions.section},
                   {"object", sessions.object},     {"type", sessions.type}};
  j["purchases"] = {{"user_id", purchases.user_id},
                    {"timestamp", purchases.timestamp},
                    {"item", purchases.item}};
  j["users"] = {{"user_id", users.user_id}, {"portfolio_prefix", users.portfolio_prefix}};
  if (!users.demographics.empty()) j["users"]["demographics"] = users.demographics;
  if (!catalog.empty()) {
    json cat = json::array();
    for (const auto& e : catalog) {
      json entry = {{"id", e.id}};
      entry["base"] = e.base.empty() ? json(nullptr) : json(e.base);
      cat.push_back(entry);
    }
    j["catalog"] = cat;
  }
  write_json_file(path, j);
}

Dataset ingest(const IngestPaths& paths, const SchemaManifest& manifest,
               const Vocabulary* frozen) {
  Dataset ds;
  if (frozen) {
    ds.vocab = *frozen;
    ds.vocab.frozen = true;
  }
  const bool fz = ds.vocab.frozen;

  // Catalog declared up front so purchases resolve against it.
  std::map<std::string, std::string> declared_base;
  for (const auto& e : manifest.catalog) {
    if (fz) {
      if (!ds.vocab.items.find(e.id)) fail("catalog: item '" + e.id + "' not in frozen vocabulary");
    } else {
      ds.vocab.items.add(e.id);
    }
    if (!e.base.empty()) declared_base[e.id] = e.base;
  }

  // --- sessions.csv ---
  {
    const CsvTable t = read_csv(paths.sessions);
    const int c_user = t.column(manifest.sessions.user_id, paths.sessions);
    const int c_sess = t.column(manifest.sessions.session_id, paths.sessions);
    const int c_time = t.column(manifest.sessions.timestamp, paths.sessions);
    const int c_section = t.column(manifest.sessions.section, paths.sessions);
    const int c_object = t.column(manifest.sessions.object, paths.sessions);
    const int c_type = t.column(manifest.sessions.type, paths.sessions);

    std::unordered_map<std::string, int> by_key;  // session key -> index
    for (const auto& row : t.rows) {
      const std::string& user = row.fields[c_user];
      const std::string& sid = row.fields[c_sess];
      if (user.empty() || sid.empty()) {
        fail(paths.sessions + ": line " + std::to_string(row.line) + ": empty id field");
      }
      Action a;
      try {
        a.timestamp = parse_timestamp(row.fields[c_time]);
        a.section = resolve_label(ds.vocab.sections, row.fields[c_section], fz, "sections");
        a.object = resolve_label(ds.vocab.objects, row.fields[c_object], fz, "objects");
        a.type = resolve_label(ds.vocab.action_types, row.fields[c_type], fz, "action types");
      } catch (const Error& e) {
        fail(paths.sessions + ": line " + std::to_string(row.line) + ": " + e.what());
      }
      const std::string key = user + "\x1f" + sid;
      auto it = by_key.find(key);
      if (it == by_key.end()) {
        by_key.emplace(key, static_cast<int>(ds.sessions.size()));
        ds.sessions.push_back({user, sid, {a}});
      } else {
        Session& s = ds.sessions[static_cast<std::size_t>(it->second)];
        if (s.user_id != user) {
          fail(paths.sessions + ": line " + std::to_string(row.line) +
               ": session id reused across users");
        }
        if (a.timestamp < s.actions.back().timestamp) {
          fail(paths.sessions + ": line " + std::to_string(row.line) +
               ": action timestamps decrease within session '" + sid + "'");
        }
        s.actions.push_back(a);
      }
    }
    std::stable_sort(ds.sessions.begin(), ds.sessions.end(),
                     [](const Session& a, const Session& b) {
                       if (a.user_id != b.user_id) return a.user_id < b.user_id;
                       if (a.start_time() != b.start_time()) return a.start_time() < b.start_time();
                       return a.session_id < b.session_id;
                     });
  }

  // --- purchases.csv ---
  {
    const CsvTable t = read_csv(paths.purchases);
    const int c_user = t.column(manifest.purchases.user_id, paths.purchases);
    const int c_time = t.column(manifest.purchases.timestamp, paths.purchases);
    const int c_item = t.column(manifest.purchases.item, paths.purchases);

    std::map<std::pair<std::string, Timestamp>, std::set<int>> events;
    for (const auto& row : t.rows) {
      Timestamp ts = 0;
      int item = -1;
      try {
        ts = parse_timestamp(row.fields[c_time]);
        item = resolve_label(ds.vocab.items, row.fields[c_item], fz, "items");
      } catch (const Error& e) {
        fail(paths.purchases + ": line " + std::to_string(row.line) + ": " + e.what());
      }
      events[{row.fields[c_user], ts}].insert(item);
    }
    for (const auto& [key, items] : events) {
      PurchaseEvent ev;
      ev.user_id = key.first;
      ev.timestamp = key.second;
      ev.items.assign(items.begin(), items.end());
      ds.purchases.push_back(std::move(ev));
    }
    std::stable_sort(ds.purchases.begin(), ds.purchases.end(),
                     [](const PurchaseEvent& a, const PurchaseEvent& b) {
                       if (a.user_id != b.user_id) return a.user_id < b.user_id;
                       return a.timestamp < b.timestamp;
                     });
  }

  // --- users.csv ---
  Index demo_dim = 0;
  {
    const CsvTable t = read_csv(paths.users);
    const int c_user = t.column(manifest.users.user_id, paths.users);
    std::vector<int> demo_cols;
    std::vector<std::pair<int, std::string>> portfolio_cols;  // column, item label
    const auto& prefix = manifest.users.portfolio_prefix;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      const std::string& h = t.header[i];
      if (static_cast<int>(i) == c_user) continue;
      if (!prefix.empty() && h.rfind(prefix, 0) == 0) {
        portfolio_cols.emplace_back(static_cast<int>(i), h.substr(prefix.size()));
      } else if (manifest.users.demographics.empty()) {
        demo_cols.push_back(static_cast<int>(i));
      }
    }
    if (!manifest.users.demographics.empty()) {
      for (const auto& name : manifest.users.demographics) {
        demo_cols.push_back(t.column(name, paths.users));
      }
    }
    for (const auto& [col, label] : portfolio_cols) {
      (void)col;
      if (fz) {
        if (!ds.vocab.items.find(label)) fail(paths.users + ": portfolio column for unknown item '" + label + "'");
      } else {
        ds.vocab.items.add(label);
      }
    }
    demo_dim = static_cast<Index>(demo_cols.size()) + 1;  // + missingness flag

    const int K = ds.vocab.catalog_size();
    for (const auto& row : t.rows) {
      UserRecord u;
      u.user_id = row.fields[c_user];
      if (u.user_id.empty()) {
        fail(paths.users + ": line " + std::to_string(row.line) + ": empty user id");
      }
      u.demographics = Vector::Zero(demo_dim);
      u.portfolio = IntVector::Zero(K);
      try {
        for (std::size_t i = 0; i < demo_cols.size(); ++i) {
          const std::string& f = row.fields[demo_cols[i]];
          u.demographics[static_cast<Index>(i)] = f.empty() ? 0.0 : std::stod(f);
        }
        for (const auto& [col, label] : portfolio_cols) {
          const std::string& f = row.fields[col];
          const int count = f.empty() ? 0 : std::stoi(f);
          if (count < 0) fail("negative portfolio count");
          u.portfolio[*ds.vocab.items.find(label)] = count;
        }
      } catch (const std::exception& e) {
        fail(paths.users + ": line " + std::to_string(row.line) + ": " + e.what());
      }
      if (ds.user_index.count(u.user_id)) {
        fail(paths.users + ": line " + std::to_string(row.line) + ": duplicate user '" +
             u.user_id + "'");
      }
      ds.user_index.emplace(u.user_id, static_cast<int>(ds.users.size()));
      ds.users.push_back(std::move(u));
    }
  }

  // Referential integrity: synthesize any user seen only in the event files.
  {
    std::set<std::string> missing;
    for (const auto& s : ds.sessions) {
      if (!ds.user_index.count(s.user_id)) missing.insert(s.user_id);
    }
    for (const auto& p : ds.purchases) {
      if (!ds.user_index.count(p.user_id)) missing.insert(p.user_id);
    }
    for (const auto& id : missing) {
      UserRecord u;
      u.user_id = id;
      u.demographics = Vector::Zero(demo_dim);
      u.demographics[demo_dim - 1] = 1.0;
      u.portfolio = IntVector::Zero(ds.vocab.catalog_size());
      u.synthesized = true;
      ds.users.push_back(std::move(u));
    }
    std::stable_sort(ds.users.begin(), ds.users.end(),
                     [](const UserRecord& a, const UserRecord& b) { return a.user_id < b.user_id; });
    ds.rebuild_user_index();
  }

  // Catalog base-product links resolve against the final item vocabulary.
  // A frozen vocabulary keeps its links unless the manifest redeclares them.
  if (!fz || !declared_base.empty() ||
      ds.vocab.item_base.size() != static_cast<std::size_t>(ds.vocab.catalog_size())) {
    ds.vocab.item_base.assign(static_cast<std::size_t>(ds.vocab.catalog_size()), -1);
  }
  for (const auto& [id, base] : declared_base) {
    auto item = ds.vocab.items.find(id);
    auto base_item = ds.vocab.items.find(base);
    if (!base_item) {
      fail("catalog: item '" + id + "' requires unknown base product '" + base + "'");
    }
    ds.vocab.item_base[static_cast<std::size_t>(*item)] = *base_item;
  }
  ds.vocab.frozen = true;
  return ds;
}

void export_dataset(const Dataset& ds, const std::string& dir, const SchemaManifest& manifest) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto& v = ds.vocab;

  std::vector<std::vector<std::string>> rows;
  for (const auto& s : ds.sessions) {
    for (const auto& a : s.actions) {
      rows.push_back({s.user_id, s.session_id, format_timestamp(a.timestamp),
                      v.sections.label(a.section), v.objects.label(a.object),
                      v.action_types.label(a.type)});
    }
  }
  write_csv(dir + "/sessions.csv",
            {"user_id", "session_id", "timestamp", "action_section", "action_object",
             "action_type"},
            rows);

  rows.clear();
  for (const auto& p : ds.purchases) {
    for (int item : p.items) {
      rows.push_back({p.user_id, format_timestamp(p.timestamp), v.items.label(item)});
    }
  }
  write_csv(dir + "/purchases.csv", {"user_id", "timestamp", "item_id"}, rows);

  rows.clear();
  std::vector<std::string> header = {"user_id"};
  Index demo_dim = 0;
  for (const auto& u : ds.users) {
    if (!u.synthesized) {
      demo_dim = u.demographics.size() - 1;  // drop the missingness flag
      break;
    }
  }
  for (Index i = 0; i < demo_dim; ++i) header.push_back("d" + std::to_string(i));
  for (int k = 0; k < v.catalog_size(); ++k) header.push_back("portfolio_" + v.items.label(k));
  for (const auto& u : ds.users) {
    if (u.synthesized) continue;
    std::vector<std::string> row = {u.user_id};
    for (Index i = 0; i < demo_dim; ++i) row.push_back(fmt_double(u.demographics[i]));
    for (int k = 0; k < v.catalog_size(); ++k) row.push_back(std::to_string(u.portfolio[k]));
    rows.push_back(std::move(row));
  }
  write_csv(dir + "/users.csv", header, rows);

  SchemaManifest out = manifest;
  out.catalog.clear();
  for (int k = 0; k < v.catalog_size(); ++k) {
    SchemaManifest::CatalogEntry e;
    e.id = v.items.label(k);
    if (v.item_base[static_cast<std::size_t>(k)] >= 0) {
      e.base = v.items.label(v.item_base[static_cast<std::size_t>(k)]);
    }
    out.catalog.push_back(std::move(e));
  }
  out.save(dir + "/manifest.json");
  // Label indices depend on first-appearance order, so re-ingesting the
  // exported files bit-exactly requires the frozen vocabulary.
  save_vocabulary(v, dir + "/vocab.json");
}

void save_vocabulary(const Vocabulary& v, const std::string& path) {
  json j;
  j["sections"] = v.sections.labels();
  j["objects"] = v.objects.labels();
  j["action_types"] = v.action_types.labels();
  j["items"] = v.items.labels();
  j["item_base"] = v.item_base;
  write_json_file(path, j);
}

Vocabulary load_vocabulary(const std::string& path) {
  const json j = load_json_file(path);
  Vocabulary v;
  for (const auto& s : j.at("sections")) v.sections.add(s.get<std::string>());
  for (const auto& s : j.at("objects")) v.objects.add(s.get<std::string>());
  for (const auto& s : j.at("action_types")) v.action_types.add(s.get<std::string>());
  for (const auto& s : j.at("items")) v.items.add(s.get<std::string>());
  v.item_base = j.at("item_base").get<std::vector<int>>();
  if (v.item_base.size() != static_cast<std::size_t>(v.catalog_size())) {
    fail(path + ": item_base length does not match catalog");
  }
  v.frozen = true;
  return v;
}

}  // namespace xsess
