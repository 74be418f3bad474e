#pragma once

#include <string>
#include <vector>

#include "xsess/core/data.hpp"

namespace xsess {

// Maps the column names of an external dataset onto the roles this library
// expects, so published files can be ingested without code changes. The
// defaults match the CSV schema written by `export_dataset` and `synth`.
struct SchemaManifest {
  struct SessionsSchema {
    std::string user_id = "user_id";
    std::string session_id = "session_id";
    std::string timestamp = "timestamp";
    std::string section = "action_section";
    std::string object = "action_object";
    std::string type = "action_type";
  } sessions;

  struct PurchasesSchema {
    std::string user_id = "user_id";
    std::string timestamp = "timestamp";
    std::string item = "item_id";
  } purchases;

  struct UsersSchema {
    std::string user_id = "user_id";
    // Demographic columns; empty means "every non-id, non-portfolio column".
    std::vector<std::string> demographics;
    std::string portfolio_prefix = "portfolio_";
  } users;

  struct CatalogEntry {
    std::string id;
    std::string base;  // empty for base products
  };
  // Optional catalog; when empty the catalog is the set of purchased and
  // owned item labels and every item is a base product.
  std::vector<CatalogEntry> catalog;

  static SchemaManifest load(const std::string& path);
  void save(const std::string& path) const;
};

struct IngestPaths {
  std::string sessions;
  std::string purchases;
  std::string users;
};

// Parses the three CSV files into an immutable dataset. Vocabularies are
// open-world unless `frozen` is given, in which case unknown labels are
// errors. Users referenced by sessions or purchases but absent from
// users.csv are synthesized with zeroed demographics and a raised
// missingness flag.
Dataset ingest(const IngestPaths& paths, const SchemaManifest& manifest = {},
               const Vocabulary* frozen = nullptr);

// Writes sessions/purchases/users CSVs with the default schema (synthesized
// users are omitted; re-ingesting yields an equal dataset).
void export_dataset(const Dataset& ds, const std::string& dir,
                    const SchemaManifest& manifest = {});

void save_vocabulary(const Vocabulary& v, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);

}  // namespace xsess
