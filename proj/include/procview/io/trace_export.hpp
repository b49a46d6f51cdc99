#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "procview/simulation.hpp"

namespace procview::io {

inline std::string interval_text(const TimeInterval& i) {
  std::string out = "⟨";
  for (std::size_t k = 0; k < i.size(); ++k) out += (k ? "," : "") + to_string(i[k]);
  return out + "⟩";
}

/// One line per tick, channels in name order: `t | a=⟨⟩ | b=⟨√⟩`.
inline std::string streams_text(const std::map<std::string, TimedStream>& channels, std::size_t horizon) {
  std::string out;
  for (Tick t = 0; t < horizon; ++t) {
    out += std::to_string(t);
    for (const auto& [name, s] : channels) out += " | " + name + "=" + interval_text(s.at(t));
    out += '\n';
  }
  return out;
}

inline std::string trace_text(const Trace& tr) { return streams_text(tr.channels, tr.horizon); }

/// Structured message encoding: events as "ev", ints as numbers, bools as
/// booleans, enum symbols as "#Name".
inline nlohmann::json message_json(const Message& m) {
  switch (m.kind()) {
    case TypeKind::Event: return "ev";
    case TypeKind::Int: return m.as_int();
    case TypeKind::Bool: return m.as_bool();
    case TypeKind::Enum: return "#" + m.as_symbol();
  }
  return nullptr;
}

using ChannelFilter = std::function<bool(const std::string&)>;

/// {horizon, channels: {name: [[msg...] per tick]}, modes: {process: [bool
/// per tick]}, warnings: [{tick, kind, location}]}. An optional filter
/// restricts channels, modes and warnings to a subset of names.
inline nlohmann::json trace_json(const Trace& tr, const ChannelFilter& channel_filter = {},
                                 const ChannelFilter& component_filter = {}) {
  nlohmann::json j;
  j["horizon"] = tr.horizon;
  nlohmann::json channels = nlohmann::json::object();
  for (const auto& [name, s] : tr.channels) {
    if (channel_filter && !channel_filter(name)) continue;
    nlohmann::json ticks = nlohmann::json::array();
    for (Tick t = 0; t < tr.horizon; ++t) {
      nlohmann::json msgs = nlohmann::json::array();
      for (const auto& m : s.at(t).messages()) msgs.push_back(message_json(m));
      ticks.push_back(std::move(msgs));
    }
    channels[name] = std::move(ticks);
  }
  j["channels"] = std::move(channels);
  nlohmann::json modes = nlohmann::json::object();
  for (const auto& [name, hist] : tr.modes) {
    if (component_filter && !component_filter(name)) continue;
    nlohmann::json h = nlohmann::json::array();
    for (const auto& m : hist) h.push_back(m.active);
    modes[name] = std::move(h);
  }
  j["modes"] = std::move(modes);
  nlohmann::json warnings = nlohmann::json::array();
  for (const auto& w : tr.warnings) {
    if (component_filter && !component_filter(w.location.substr(0, w.location.find(':')))) continue;
    warnings.push_back({{"tick", w.tick}, {"kind", std::string(to_string(w.kind))}, {"location", w.location}});
  }
  j["warnings"] = std::move(warnings);
  return j;
}

inline std::string trace_json_text(const Trace& tr, const ChannelFilter& channel_filter = {},
                                   const ChannelFilter& component_filter = {}) {
  return trace_json(tr, channel_filter, component_filter).dump(2) + "\n";
}

}  // namespace procview::io
