#include "manifest.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "tpm/error.hpp"
#include "tpm/io.hpp"

namespace tpm::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot hash " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw Error("sha256 init failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

void Manifest::write(const std::filesystem::path& out_dir) const {
  nlohmann::json in = nlohmann::json::object();
  for (const auto& p : inputs) in[p.string()] = sha256_file(p);
  nlohmann::json out = nlohmann::json::object();
  for (const auto& p : outputs) out[p.generic_string()] = sha256_file(out_dir / p);
  const nlohmann::json j = {{"tool", "tpathmine"},
                            {"version", TPM_VERSION},
                            {"command", command},
                            {"config", config},
                            {"inputs", in},
                            {"outputs", out}};
  write_file(out_dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace tpm::cli
