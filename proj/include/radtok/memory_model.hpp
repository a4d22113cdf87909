#pragma once

#include <cstdint>
#include <string_view>

#include <json.hpp>

namespace radtok {

// Shape of a decoder-only transformer and its training batch.
struct ModelConfig {
  std::uint64_t batch = 1;      // B
  std::uint64_t seq_len = 1;    // S
  std::uint64_t vocab = 1;      // V
  std::uint64_t hidden = 512;   // D
  std::uint64_t heads = 8;      // H
  std::uint64_t blocks = 8;     // N
  std::uint64_t ffn = 2048;     // D_ff
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Throws ConfigError unless every field is positive and hidden % heads == 0.
void validate(const ModelConfig& cfg);

// Keys B, S, V, D, H, N, D_ff. Missing keys keep the values of `defaults`.
ModelConfig model_config_from_json(const nlohmann::json& j, ModelConfig defaults = {});
nlohmann::ordered_json to_json(const ModelConfig& cfg);

// Activation elements of one training step:
//   2BSV + 2BSD + N (16BSD + 2BS^2H)
// Throws OverflowError rather than wrapping.
std::uint64_t activation_elements(const ModelConfig& cfg);

// Decoder parameter count: token and positional embeddings, per block
// attention (4D^2 + 4D), feed-forward (2 D D_ff + D_ff + D) and two layer
// norms (4D), a final norm (2D), plus an output head (VD + V) unless tied.
std::uint64_t parameter_elements(const ModelConfig& cfg, bool tied_embeddings);

struct MemoryOptions {
  std::uint64_t bytes_per_element = 4;  // one of 1, 2, 4, 8
  std::uint64_t optimizer_moments = 2;  // Adam keeps two
  bool tied_embeddings = false;
};

struct MemoryEstimate {
  std::uint64_t act_elements = 0;
  std::uint64_t param_elements = 0;
  std::uint64_t grad_elements = 0;
  std::uint64_t opt_elements = 0;
  std::uint64_t bytes_per_element = 4;
  std::uint64_t total_bytes = 0;
  friend bool operator==(const MemoryEstimate&, const MemoryEstimate&) = default;
};

// Activations + parameters + gradients + optimizer state, in bytes.
MemoryEstimate total_memory(const ModelConfig& cfg, const MemoryOptions& options = {});

// Largest B with total_memory(B) <= budget_bytes < total_memory(B + 1); the
// batch field of `cfg` is ignored. Throws ConfigError when even B = 1 does
// not fit.
std::uint64_t max_batch(const ModelConfig& cfg, std::uint64_t budget_bytes,
                        const MemoryOptions& options = {});

// "123", "48GiB", "512MiB", "1.5GiB", "2GB", "10KB". IEC suffixes are powers
// of 1024, SI suffixes powers of 1000. Throws ConfigError on bad input.
std::uint64_t parse_byte_size(std::string_view text);

nlohmann::ordered_json to_json(const MemoryEstimate& estimate);

}  // namespace radtok
