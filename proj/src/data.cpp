#include "xsess/core/data.hpp"

#include <algorithm>

namespace xsess {

int LabelMap::add(const std::string& label) {
  auto it = index_.find(label);
  if (it != index_.end()) return it->second;
  const int id = static_cast<int>(labels_.size());
  labels_.push_back(label);
  index_.emplace(label, id);
  return id;
}

std::optional<int> LabelMap::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int LabelMap::at(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) fail("unknown label '" + label + "'");
  return it->second;
}

const std::string& LabelMap::label(int index) const {
  if (index < 0 || index >= size()) fail("label index out of range");
  return labels_[static_cast<std::size_t>(index)];
}

std::optional<int> Vocabulary::object_of_item(int k) const {
  return objects.find(items.label(k));
}

std::optional<int> Vocabulary::item_of_object(int object_index) const {
  return items.find(objects.label(object_index));
}

Vector binarize_action(const Action& a, const Vocabulary& v) {
  if (a.section < 0 || a.section >= v.sections.size() || a.object < 0 ||
      a.object >= v.objects.size() || a.type < 0 || a.type >= v.action_types.size()) {
    fail("binarize_action: label index outside vocabulary");
  }
  Vector x = Vector::Zero(v.action_dim());
  x[a.section] = 1.0;
  x[v.sections.size() + a.object] = 1.0;
  x[v.sections.size() + v.objects.size() + a.type] = 1.0;
  return x;
}

const UserRecord& Dataset::user(const std::string& user_id) const {
  auto it = user_index.find(user_id);
  if (it == user_index.end()) fail("unknown user '" + user_id + "'");
  return users[static_cast<std::size_t>(it->second)];
}

void Dataset::rebuild_user_index() {
  user_index.clear();
  for (std::size_t i = 0; i < users.size(); ++i) {
    user_index.emplace(users[i].user_id, static_cast<int>(i));
  }
}

bool operator==(const Action& a, const Action& b) {
  return a.same_tuple(b) && a.timestamp == b.timestamp;
}

bool operator==(const Session& a, const Session& b) {
  return a.user_id == b.user_id && a.session_id == b.session_id && a.actions == b.actions;
}

bool operator==(const PurchaseEvent& a, const PurchaseEvent& b) {
  return a.user_id == b.user_id && a.timestamp == b.timestamp && a.items == b.items;
}

namespace {
template <class V>
bool vec_equal(const V& a, const V& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}
}  // namespace

bool operator==(const UserRecord& a, const UserRecord& b) {
  return a.user_id == b.user_id && a.synthesized == b.synthesized &&
         vec_equal(a.demographics, b.demographics) && vec_equal(a.portfolio, b.portfolio);
}

bool operator==(const Vocabulary& a, const Vocabulary& b) {
  return a.sections.labels() == b.sections.labels() && a.objects.labels() == b.objects.labels() &&
         a.action_types.labels() == b.action_types.labels() &&
         a.items.labels() == b.items.labels() && a.item_base == b.item_base;
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.vocab == b.vocab && a.sessions == b.sessions && a.purchases == b.purchases &&
         a.users == b.users;
}

}  // namespace xsess
