#include <cstdio>
#include <sstream>

#include "eigenfeat/binary_io.hpp"
#include "eigenfeat/cnn/network.hpp"
#include "eigenfeat/error.hpp"

namespace eigenfeat::cnn {
namespace {

constexpr std::string_view kMagic = "MCNN";

std::string metadata_text(const TrainingMetadata& m) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "seed %llu\nepochs %zu\niterations %zu\nfinal_train_loss %.17g\nfinal_val_loss %.17g\n"
                "final_val_accuracy %.17g\n",
                static_cast<unsigned long long>(m.seed), m.epochs, m.iterations, m.final_train_loss,
                m.final_val_loss, m.final_val_accuracy);
  return buf;
}

TrainingMetadata parse_metadata(const std::string& text) {
  TrainingMetadata m;
  std::istringstream in(text);
  std::string key, value;
  while (in >> key >> value) {
    const double d = std::strtod(value.c_str(), nullptr);
    if (key == "seed")
      m.seed = std::stoull(value);
    else if (key == "epochs")
      m.epochs = std::stoull(value);
    else if (key == "iterations")
      m.iterations = std::stoull(value);
    else if (key == "final_train_loss")
      m.final_train_loss = d;
    else if (key == "final_val_loss")
      m.final_val_loss = d;
    else if (key == "final_val_accuracy")
      m.final_val_accuracy = d;
    else
      fail(ErrorCode::corrupt_payload, "unknown metadata key '" + key + "'");
  }
  return m;
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  ByteWriter w;
  w.raw(kMagic);
  w.u16(kCheckpointVersion);
  w.text(to_canonical_text(ckpt.config));
  std::uint64_t count = 0;
  for (const auto& t : ckpt.parameters) count += t.size();
  w.u64(count);
  for (const auto& t : ckpt.parameters) w.f64s(t.values());
  w.text(metadata_text(ckpt.metadata));
  w.seal();
  return w.bytes();
}

Checkpoint deserialize_checkpoint(std::string_view bytes) {
  require(bytes.size() >= 6 && bytes.substr(0, 4) == kMagic, ErrorCode::corrupt_payload, "not an MCNN checkpoint");
  {
    ByteReader head(bytes.substr(4, 2));
    const auto version = head.u16();
    require(version == kCheckpointVersion, ErrorCode::version_mismatch,
            "checkpoint version " + std::to_string(version) + ", expected " + std::to_string(kCheckpointVersion));
  }
  ByteReader r(verify_sealed(bytes));
  r.raw(6);

  Checkpoint ckpt;
  ckpt.config = parse_canonical_text(r.text());
  // shapes come from the architecture
  Network shape_source(ckpt.config);
  const auto params = shape_source.parameters();
  const std::uint64_t count = r.u64();
  std::uint64_t expected = 0;
  for (const auto* p : params) expected += p->value.size();
  require(count == expected, ErrorCode::corrupt_payload,
          "parameter count " + std::to_string(count) + " does not match architecture (" +
              std::to_string(expected) + ")");
  for (const auto* p : params) {
    Tensor t(p->value.shape());
    r.f64s(t.values());
    ckpt.parameters.push_back(std::move(t));
  }
  ckpt.metadata = parse_metadata(r.text());
  require(r.remaining() == 0, ErrorCode::corrupt_payload, "trailing bytes after metadata");
  return ckpt;
}

std::string Checkpoint::digest() const { return hex32(crc32(serialize_checkpoint(*this))); }

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  write_file(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return deserialize_checkpoint(read_file(path)); }

}  // namespace eigenfeat::cnn
