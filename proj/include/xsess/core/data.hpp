#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xsess/types.hpp"

namespace xsess {

// One logged user interaction: (section, object, type) against a
// vocabulary, plus when it happened.
struct Action {
  int section = -1;
  int object = -1;
  int type = -1;
  Timestamp timestamp = 0;

  bool same_tuple(const Action& o) const {
    return section == o.section && object == o.object && type == o.type;
  }
};

struct Session {
  std::string user_id;
  std::string session_id;
  std::vector<Action> actions;  // timestamp order, ties keep file order

  Timestamp start_time() const { return actions.front().timestamp; }
  std::string key() const { return user_id + "\x1f" + session_id; }
};

struct PurchaseEvent {
  std::string user_id;
  Timestamp timestamp = 0;
  std::vector<int> items;  // catalog indices, ascending, unique
};

struct UserRecord {
  std::string user_id;
  Vector demographics;   // numeric features, last entry is a missingness flag
  IntVector portfolio;   // owned copies per catalog item
  bool synthesized = false;  // not present in users.csv
};

// A dense label<->index bijection for one label domain.
class LabelMap {
 public:
  int add(const std::string& label);             // idempotent insert
  std::optional<int> find(const std::string& label) const;
  int at(const std::string& label) const;        // throws when absent
  const std::string& label(int index) const;
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

// All label domains of a dataset. Items form the recommendation catalog;
// item labels that also occur as action objects are linked by label.
struct Vocabulary {
  LabelMap sections;
  LabelMap objects;
  LabelMap action_types;
  LabelMap items;
  // For each catalog item, the catalog index of its required base product,
  // or -1 for base products themselves.
  std::vector<int> item_base;
  bool frozen = false;

  int action_dim() const {
    return sections.size() + objects.size() + action_types.size();
  }
  int catalog_size() const { return items.size(); }

  // Object-vocabulary index of catalog item k, when the item label occurs
  // as an action object.
  std::optional<int> object_of_item(int k) const;
  // Catalog index of the item whose label equals this object label, if any.
  std::optional<int> item_of_object(int object_index) const;
};

// Concatenated one-hot blocks [sections | objects | action_types].
Vector binarize_action(const Action& a, const Vocabulary& v);

struct Dataset {
  Vocabulary vocab;
  std::vector<Session> sessions;          // (user_id, start_time, session_id) order
  std::vector<PurchaseEvent> purchases;   // (user_id, timestamp) order
  std::vector<UserRecord> users;          // user_id order
  std::unordered_map<std::string, int> user_index;

  const UserRecord& user(const std::string& user_id) const;
  void rebuild_user_index();
};

bool operator==(const Action& a, const Action& b);
bool operator==(const Session& a, const Session& b);
bool operator==(const PurchaseEvent& a, const PurchaseEvent& b);
bool operator==(const UserRecord& a, const UserRecord& b);
bool operator==(const Vocabulary& a, const Vocabulary& b);
bool operator==(const Dataset& a, const Dataset& b);

}  // namespace xsess
