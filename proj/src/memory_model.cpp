#include "radtok/memory_model.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "radtok/checked_math.hpp"
#include "radtok/error.hpp"

namespace radtok {

void validate(const ModelConfig& cfg) {
  const std::array<std::pair<const char*, std::uint64_t>, 7> fields = {{
      {"B", cfg.batch}, {"S", cfg.seq_len}, {"V", cfg.vocab}, {"D", cfg.hidden},
      {"H", cfg.heads}, {"N", cfg.blocks}, {"D_ff", cfg.ffn}}};
  for (const auto& [name, value] : fields) {
    if (value == 0) throw ConfigError(std::string("model parameter ") + name + " must be positive");
  }
  if (cfg.hidden % cfg.heads != 0) {
    throw ConfigError("hidden dimension D=" + std::to_string(cfg.hidden) +
                      " is not divisible by H=" + std::to_string(cfg.heads));
  }
}

ModelConfig model_config_from_json(const nlohmann::json& j, ModelConfig defaults) {
  if (!j.is_object()) throw ParseError("model config must be a JSON object");
  auto read = [&](const char* key, std::uint64_t& field) {
    auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_number_integer() || *it < 0) {
      throw ParseError(std::string("model config field '") + key +
                       "' must be a non-negative integer");
    }
    field = it->get<std::uint64_t>();
  };
  read("B", defaults.batch);
  read("S", defaults.seq_len);
  read("V", defaults.vocab);
  read("D", defaults.hidden);
  read("H", defaults.heads);
  read("N", defaults.blocks);
  read("D_ff", defaults.ffn);
  return defaults;
}

nlohmann::ordered_json to_json(const ModelConfig& cfg) {
  return {{"B", cfg.batch}, {"S", cfg.seq_len}, {"V", cfg.vocab}, {"D", cfg.hidden},
          {"H", cfg.heads}, {"N", cfg.blocks},  {"D_ff", cfg.ffn}};
}

std::uint64_t activation_elements(const ModelConfig& cfg) {
  validate(cfg);
  using checked::add;
  using checked::mul;
  const auto bs = mul(cfg.batch, cfg.seq_len);
  const auto embed_and_head = mul(2, bs, cfg.vocab);
  const auto hidden_states = mul(2, bs, cfg.hidden);
  const auto per_block = add(mul(16, bs, cfg.hidden), mul(2, bs, cfg.seq_len, cfg.heads));
  return add(embed_and_head, hidden_states, mul(cfg.blocks, per_block));
}

std::uint64_t parameter_elements(const ModelConfig& cfg, bool tied_embeddings) {
  validate(cfg);
  using checked::add;
  using checked::mul;
  const auto d = cfg.hidden;
  const auto attention = add(mul(4, d, d), mul(4, d));
  const auto feed_forward = add(mul(2, d, cfg.ffn), cfg.ffn, d);
  const auto norms = mul(4, d);
  const auto per_block = add(attention, feed_forward, norms);
  auto total = add(mul(cfg.vocab, d), mul(cfg.seq_len, d), mul(cfg.blocks, per_block),
                   mul(2, d));
  if (!tied_embeddings) total = add(total, mul(cfg.vocab, d), cfg.vocab);
  return total;
}

MemoryEstimate total_memory(const ModelConfig& cfg, const MemoryOptions& options) {
  switch (options.bytes_per_element) {
    case 1: case 2: case 4: case 8: break;
    default:
      throw ConfigError("bytes per element must be 1, 2, 4 or 8, got " +
                        std::to_string(options.bytes_per_element));
  }
  MemoryEstimate m;
  m.act_elements = activation_elements(cfg);
  m.param_elements = parameter_elements(cfg, options.tied_embeddings);
  m.grad_elements = m.param_elements;
  m.opt_elements = checked::mul(options.optimizer_moments, m.param_elements);
  m.bytes_per_element = options.bytes_per_element;
  m.total_bytes = checked::mul(
      options.bytes_per_element,
      checked::add(m.act_elements, m.param_elements, m.grad_elements, m.opt_elements));
  return m;
}

namespace {

// total_memory at batch b, or nullopt when it does not fit in 64 bits.
std::optional<std::uint64_t> total_at(ModelConfig cfg, std::uint64_t b,
                                      const MemoryOptions& options) {
  cfg.batch = b;
  try {
    return total_memory(cfg, options).total_bytes;
  } catch (const OverflowError&) {
    return std::nullopt;
  }
}

}  // namespace

std::uint64_t max_batch(const ModelConfig& cfg, std::uint64_t budget_bytes,
                        const MemoryOptions& options) {
  ModelConfig one = cfg;
  one.batch = 1;
  const MemoryEstimate base = total_memory(one, options);  // surfaces config errors
  if (base.total_bytes > budget_bytes) {
    throw ConfigError("budget infeasible at B=1: " + std::to_string(budget_bytes) +
                      " bytes available, " + std::to_string(base.total_bytes) + " required");
  }
  // Activations are linear in B, everything else is independent of it.
  const std::uint64_t per_sample = base.act_elements;
  const std::uint64_t fixed = base.total_bytes / base.bytes_per_element - per_sample;
  const std::uint64_t b = (budget_bytes / base.bytes_per_element - fixed) / per_sample;

  const auto at_b = total_at(cfg, b, options);
  const auto above = b == std::numeric_limits<std::uint64_t>::max()
                         ? std::nullopt
                         : total_at(cfg, b + 1, options);
  if (!at_b || *at_b > budget_bytes || (above && *above <= budget_bytes)) {
    throw InvariantError("max_batch failed to bracket the budget at B=" + std::to_string(b));
  }
  return b;
}

std::uint64_t parse_byte_size(std::string_view text) {
  const auto bad = [&] {
    return ConfigError("invalid byte size '" + std::string(text) +
                       "' (expected e.g. 48GiB, 512MiB, 2GB or a plain byte count)");
  };
  std::size_t split = 0;
  while (split < text.size() &&
         ((text[split] >= '0' && text[split] <= '9') || text[split] == '.')) {
    ++split;
  }
  const std::string_view number = text.substr(0, split);
  std::string_view suffix = text.substr(split);
  while (!suffix.empty() && suffix.front() == ' ') suffix.remove_prefix(1);
  if (number.empty()) throw bad();

  struct Unit {
    std::string_view name;
    double scale;
  };
  static constexpr std::array<Unit, 11> kUnits = {{
      {"", 1.0}, {"B", 1.0},
      {"KiB", 1024.0}, {"MiB", 1048576.0}, {"GiB", 1073741824.0}, {"TiB", 1099511627776.0},
      {"KB", 1e3}, {"kB", 1e3}, {"MB", 1e6}, {"GB", 1e9}, {"TB", 1e12}}};
  const Unit* unit = nullptr;
  for (const auto& u : kUnits) {
    if (u.name == suffix) unit = &u;
  }
  if (!unit) throw bad();

  if (number.find('.') == std::string_view::npos) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
    if (ec != std::errc() || ptr != number.data() + number.size()) throw bad();
    try {
      return checked::mul(value, static_cast<std::uint64_t>(unit->scale));
    } catch (const OverflowError&) {
      throw ConfigError("byte size '" + std::string(text) + "' overflows 64 bits");
    }
  }
  double value = 0;
  try {
    std::size_t used = 0;
    value = std::stod(std::string(number), &used);
    if (used != number.size()) throw bad();
  } catch (const std::logic_error&) {
    throw bad();
  }
  const double bytes = std::floor(value * unit->scale);
  if (!(bytes >= 0) || bytes >= 18446744073709551616.0) {
    throw ConfigError("byte size '" + std::string(text) + "' overflows 64 bits");
  }
  return static_cast<std::uint64_t>(bytes);
}

nlohmann::ordered_json to_json(const MemoryEstimate& m) {
  return {{"act_elements", m.act_elements},       {"param_elements", m.param_elements},
          {"grad_elements", m.grad_elements},     {"opt_elements", m.opt_elements},
          {"bytes_per_element", m.bytes_per_element}, {"total_bytes", m.total_bytes}};
}

}  // namespace radtok
