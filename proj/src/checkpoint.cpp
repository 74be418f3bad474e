#include "xsess/neural/checkpoint.hpp"

#include <cstdint>
#include <fstream>

namespace xsess {

using nlohmann::json;

namespace {
constexpr char kMagic[4] = {'X', 'S', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 4);
}

std::uint32_t read_u32(std::istream& in) {
  char buf[4];
  in.read(buf, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
  return v;
}
}  // namespace

const Matrix& Checkpoint::tensor(const std::string& name) const {
  for (const auto& [n, m] : tensors) {
    if (n == name) return m;
  }
  fail("checkpoint: missing tensor '" + name + "'");
}

void save_checkpoint(const std::string& path, const std::string& model_kind, const json& meta,
                     const ParamRefs& tensors) {
  json header;
  header["model"] = model_kind;
  header["meta"] = meta;
  json shapes = json::array();
  for (const auto& t : tensors) {
    shapes.push_back({{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}});
  }
  header["tensors"] = shapes;
  const std::string head = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path + ": cannot open checkpoint for writing");
  out.write(kMagic, 4);
  write_u32(out, kVersion);
  write_u32(out, static_cast<std::uint32_t>(head.size()));
  out.write(head.data(), static_cast<std::streamsize>(head.size()));
  for (const auto& t : tensors) {
    out.write(reinterpret_cast<const char*>(t.data),
              static_cast<std::streamsize>(sizeof(Scalar)) * t.size());
  }
  if (!out) fail(path + ": checkpoint write failed");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path + ": cannot open checkpoint");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != std::string(kMagic, 4)) {
    fail(path + ": not a checkpoint file");
  }
  const std::uint32_t version = read_u32(in);
  if (version != kVersion) {
    fail(path + ": unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t head_len = read_u32(in);
  std::string head(head_len, '\0');
  in.read(head.data(), head_len);
  json header;
  try {
    header = json::parse(head);
  } catch (const json::exception& e) {
    fail(path + ": corrupt checkpoint header: " + e.what());
  }

  Checkpoint ck;
  ck.model_kind = header.at("model").get<std::string>();
  ck.meta = header.value("meta", json::object());
  for (const auto& t : header.at("tensors")) {
    Matrix m(t.at("rows").get<Index>(), t.at("cols").get<Index>());
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(Scalar)) * m.size());
    if (!in) fail(path + ": truncated checkpoint payload");
    ck.tensors.emplace_back(t.at("name").get<std::string>(), std::move(m));
  }
  return ck;
}

void restore_params(const Checkpoint& ck, const ParamRefs& refs) {
  if (ck.tensors.size() != refs.size()) {
    fail("checkpoint: tensor count mismatch (" + std::to_string(ck.tensors.size()) + " vs " +
         std::to_string(refs.size()) + ")");
  }
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const auto& [name, m] = ck.tensors[i];
    if (name != refs[i].name || m.rows() != refs[i].rows || m.cols() != refs[i].cols) {
      fail("checkpoint: tensor '" + name + "' does not match expected '" + refs[i].name + "' (" +
           std::to_string(refs[i].rows) + "x" + std::to_string(refs[i].cols) + ")");
    }
    refs[i].map() = m;
  }
}

}  // namespace xsess
