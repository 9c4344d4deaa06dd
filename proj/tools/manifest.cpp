#include "manifest.hpp"

#include "specgr/errors.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <fstream>
#include <memory>

namespace specgr::cli {

namespace {

class Digest {
 public:
  Digest() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) throw DataError("sha256 init failed");
  }
  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_.get(), data, n); }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), md, &len);
    std::string out;
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot read {}", path.string()));
  Digest d;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return d.hex();
}

std::string sha256_text(const std::string& text) {
  Digest d;
  d.update(text.data(), text.size());
  return d.hex();
}

std::string config_hash(const nlohmann::json& config) { return sha256_text(config.dump()).substr(0, 16); }

fs::path manifest_path(const fs::path& artifact) { return fs::path(artifact.string() + ".manifest.json"); }

void write_manifests(const ManifestInfo& info) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& p : info.inputs) inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& p : info.outputs) outputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  for (const auto& p : info.outputs) {
    nlohmann::json m = {{"format", 1},
                        {"command", info.command},
                        {"artifact", p.filename().string()},
                        {"config", info.config},
                        {"config_hash", config_hash(info.config)},
                        {"seed", info.seed},
                        {"inputs", inputs},
                        {"outputs", outputs},
                        {"duration_ms", info.duration_ms}};
    std::ofstream out(manifest_path(p));
    if (!out) throw DataError(fmt::format("cannot write {}", manifest_path(p).string()));
    out << m.dump(2) << '\n';
  }
}

void check_artifact(const fs::path& artifact, const std::string& producer, const nlohmann::json& expected_config,
                    bool force) {
  if (!fs::exists(artifact)) {
    throw UsageError(fmt::format("missing {}; run `specgr {}` first", artifact.string(), producer));
  }
  const fs::path mp = manifest_path(artifact);
  std::ifstream in(mp);
  if (!in) {
    if (force) return;
    throw FormatError(fmt::format("{} has no manifest; rerun `specgr {}` or pass --force", artifact.string(), producer));
  }
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("{}: {}", mp.string(), e.what()));
  }
  const std::string want = config_hash(expected_config);
  const std::string have = m.value("config_hash", std::string());
  if (have != want && !force) {
    throw FormatError(fmt::format(
        "{} was built with config {} (hash {}) but the active config is {} (hash {}); rerun `specgr {}` or pass --force",
        artifact.string(), m.value("config", nlohmann::json::object()).dump(), have, expected_config.dump(), want,
        producer));
  }
}

}  // namespace specgr::cli
