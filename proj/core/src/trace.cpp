#include "wbansec/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wbansec {
namespace {

// Body-geometry baseline attenuation in dB between node pairs (symmetric).
// With a -60 dBm transmitter and -100 dBm sensitivity the link budget is
// 40 dB, so entries above 40 are unusable without posture-dependent luck.
// The ankle cannot reach the chest directly and must relay (thigh or navel).
constexpr double kBaseDb[kNodeCount][kNodeCount] = {
    //        navel chest head  arm  ankle thigh wrist
    /*navel*/ {0, 22, 30, 28, 34, 22, 30},
    /*chest*/ {22, 0, 24, 24, 44, 28, 32},
    /*head */ {30, 24, 0, 26, 52, 40, 38},
    /*arm  */ {28, 24, 26, 0, 50, 34, 22},
    /*ankle*/ {34, 44, 52, 50, 0, 24, 46},
    /*thigh*/ {22, 28, 40, 34, 24, 0, 36},
    /*wrist*/ {30, 32, 38, 22, 46, 36, 0},
};

bool touches(NodeId src, NodeId dst, NodeId node) { return src == node || dst == node; }

bool limb_link(NodeId src, NodeId dst) {
  return touches(src, dst, kAnkle) || touches(src, dst, kWrist);
}

bool arm_link(NodeId src, NodeId dst) { return touches(src, dst, kUpperArm); }

// Smooth 0..1..0 motion envelope across one posture cycle.
double wave(int frame, int frames) {
  return 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(frame) / frames));
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

const char* posture_name(Posture posture) {
  switch (posture) {
    case Posture::Walk: return "walk";
    case Posture::Run: return "run";
    case Posture::Weak: return "weak";
    case Posture::Sit: return "sit";
    case Posture::Wear: return "wear";
    case Posture::Sleep: return "sleep";
    case Posture::Lie: return "lie";
  }
  return "?";
}

std::optional<Posture> parse_posture(const std::string& name) {
  for (Posture p : all_postures()) {
    if (name == posture_name(p)) return p;
  }
  return std::nullopt;
}

const std::array<Posture, 7>& all_postures() {
  static const std::array<Posture, 7> kAll = {
      Posture::Walk, Posture::Run,  Posture::Weak, Posture::Sit,
      Posture::Wear, Posture::Sleep, Posture::Lie,
  };
  return kAll;
}

LinkTrace::LinkTrace(Posture posture, int frame_count, double frame_duration_ms)
    : posture_(posture), frame_count_(frame_count), frame_duration_ms_(frame_duration_ms) {
  if (frame_count_ < 1) throw ConfigError("link trace needs at least one frame");
  if (!(frame_duration_ms_ > 0.0)) throw ConfigError("frame duration must be positive");
  table_.resize(static_cast<std::size_t>(frame_count_) * kNodeCount * kNodeCount);
  present_.resize(table_.size(), false);
}

std::size_t LinkTrace::index(int frame, NodeId src, NodeId dst) const {
  if (frame < 0 || frame >= frame_count_ || src >= kNodeCount || dst >= kNodeCount ||
      src == dst) {
    throw MissingTraceEntry("no trace entry for frame " + std::to_string(frame) + " link " +
                            std::to_string(src) + "->" + std::to_string(dst));
  }
  return (static_cast<std::size_t>(frame) * kNodeCount + src) * kNodeCount + dst;
}

void LinkTrace::set(int frame, NodeId src, NodeId dst, LinkStat stat) {
  const std::size_t i = index(frame, src, dst);
  table_[i] = stat;
  present_[i] = true;
}

const LinkStat& LinkTrace::at(int frame, NodeId src, NodeId dst) const {
  const std::size_t i = index(frame, src, dst);
  if (!present_[i]) {
    throw MissingTraceEntry("trace entry missing for frame " + std::to_string(frame) +
                            " link " + std::to_string(src) + "->" + std::to_string(dst));
  }
  return table_[i];
}

int LinkTrace::frame_at(std::uint64_t now_us) const {
  const auto frame_us = static_cast<std::uint64_t>(frame_duration_ms_ * 1000.0);
  return static_cast<int>((now_us / frame_us) % static_cast<std::uint64_t>(frame_count_));
}

void LinkTrace::validate() const {
  for (int f = 0; f < frame_count_; ++f) {
    for (NodeId s = 0; s < kNodeCount; ++s) {
      for (NodeId d = 0; d < kNodeCount; ++d) {
        if (s == d) continue;
        const LinkStat& stat = at(f, s, d);  // throws if absent
        if (stat.std_db < 0.0) {
          throw ConfigError("negative stddev in trace at frame " + std::to_string(f));
        }
      }
    }
  }
}

LinkTrace LinkTrace::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingTrace("cannot open trace file " + path);

  double frame_duration_ms = 100.0;
  {
    std::ifstream meta(path + ".meta");
    std::string line;
    while (meta && std::getline(meta, line)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      if (trim(line.substr(0, eq)) == "frame_duration_ms") {
        frame_duration_ms = std::stod(trim(line.substr(eq + 1)));
      }
    }
  }

  std::string header;
  if (!std::getline(in, header) || trim(header) != "posture,frame,src,dst,mean_db,std_db") {
    throw ConfigError("bad trace CSV header in " + path);
  }

  struct Row {
    int frame;
    NodeId src, dst;
    LinkStat stat;
  };
  std::vector<Row> rows;
  std::optional<Posture> posture;
  int max_frame = -1;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (cells.size() != 6) {
      throw ConfigError("bad trace CSV row at line " + std::to_string(line_no));
    }
    const auto p = parse_posture(cells[0]);
    if (!p) throw ConfigError("unknown posture '" + cells[0] + "' in " + path);
    if (posture && *posture != *p) throw ConfigError("mixed postures in " + path);
    posture = *p;
    Row row{};
    row.frame = std::stoi(cells[1]);
    row.src = static_cast<NodeId>(std::stoi(cells[2]));
    row.dst = static_cast<NodeId>(std::stoi(cells[3]));
    row.stat.mean_db = std::stod(cells[4]);
    row.stat.std_db = std::stod(cells[5]);
    max_frame = std::max(max_frame, row.frame);
    rows.push_back(row);
  }
  if (!posture || max_frame < 0) throw ConfigError("empty trace file " + path);

  LinkTrace trace(*posture, max_frame + 1, frame_duration_ms);
  for (const Row& row : rows) trace.set(row.frame, row.src, row.dst, row.stat);
  trace.validate();
  return trace;
}

void LinkTrace::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write trace file " + path);
  out << "posture,frame,src,dst,mean_db,std_db\n";
  char buf[32];
  for (int f = 0; f < frame_count_; ++f) {
    for (NodeId s = 0; s < kNodeCount; ++s) {
      for (NodeId d = 0; d < kNodeCount; ++d) {
        if (s == d) continue;
        const LinkStat& stat = at(f, s, d);
        out << posture_name(posture_) << ',' << f << ',' << int(s) << ',' << int(d) << ',';
        std::snprintf(buf, sizeof buf, "%.3f", stat.mean_db);
        out << buf << ',';
        std::snprintf(buf, sizeof buf, "%.3f", stat.std_db);
        out << buf << '\n';
      }
    }
  }
  std::ofstream meta(path + ".meta");
  if (!meta) throw ConfigError("cannot write trace sidecar for " + path);
  meta << "frame_duration_ms = " << frame_duration_ms_ << "\n";
}

// The synthetic tables keep the body geometry above and modulate it per
// posture:
//   walk/run/weak - periodic limb swing adds attenuation to wrist/ankle links,
//                   strongest for run (deep fades at the swing peak);
//   wear          - arm and wrist links degrade while the jacket goes on;
//   sit/lie       - nearly static with small offsets;
//   sleep         - the body shadows the chest: every link adjacent to the
//                   sink is rewritten to sit near or above the 40 dB budget,
//                   so traffic funnels through lossy pre-sink hops while the
//                   rest of the body stays well connected.
LinkTrace LinkTrace::synthetic(Posture posture) {
  int frames = 30;
  switch (posture) {
    case Posture::Sit: frames = 12; break;
    case Posture::Wear: frames = 24; break;
    case Posture::Sleep: frames = 10; break;
    case Posture::Lie: frames = 10; break;
    default: frames = 30; break;
  }
  LinkTrace trace(posture, frames);

  // Sleep overrides for links touching the chest (indexed by the other node).
  constexpr double kSleepSinkMean[kNodeCount] = {42.5, 0, 43.0, 43.0, 52.0, 45.0, 46.0};

  for (int f = 0; f < frames; ++f) {
    const double w = wave(f, frames);
    for (NodeId s = 0; s < kNodeCount; ++s) {
      for (NodeId d = 0; d < kNodeCount; ++d) {
        if (s == d) continue;
        LinkStat stat{kBaseDb[s][d], 1.0};
        switch (posture) {
          case Posture::Walk:
            if (limb_link(s, d)) {
              stat.mean_db += 6.0 * w;
              stat.std_db = 2.0;
            } else if (arm_link(s, d)) {
              stat.mean_db += 2.0 * w;
              stat.std_db = 1.5;
            }
            break;
          case Posture::Run:
            stat.std_db = 1.5;
            if (limb_link(s, d)) {
              stat.mean_db += 12.0 * w;
              stat.std_db = 3.0;
            } else if (arm_link(s, d)) {
              stat.mean_db += 5.0 * w;
              stat.std_db = 2.0;
            }
            break;
          case Posture::Weak:
            stat.std_db = 0.7;
            if (limb_link(s, d)) {
              stat.mean_db += 3.0 * w;
              stat.std_db = 1.0;
            }
            break;
          case Posture::Sit:
            stat.std_db = 0.5;
            if (limb_link(s, d)) {
              stat.mean_db += 2.0;
              stat.std_db = 0.8;
            }
            break;
          case Posture::Wear:
            stat.std_db = 1.0;
            if (arm_link(s, d) || touches(s, d, kWrist)) {
              stat.mean_db += 10.0 * w;
              stat.std_db = 2.5;
            } else if (limb_link(s, d)) {
              stat.mean_db += 2.0 * w;
              stat.std_db = 1.2;
            }
            break;
          case Posture::Sleep:
            if (touches(s, d, kChest)) {
              stat.mean_db = kSleepSinkMean[s == kChest ? d : s];
              stat.std_db = 3.0;
            } else {
              stat.mean_db += 2.0;
              stat.std_db = 1.0;
            }
            break;
          case Posture::Lie:
            if (touches(s, d, kChest)) {
              stat.mean_db += 4.0;
              stat.std_db = 1.5;
            } else {
              stat.mean_db += 2.0;
              stat.std_db = 1.0;
            }
            break;
        }
        trace.set(f, s, d, stat);
      }
    }
  }
  return trace;
}

LinkTrace LinkTrace::perfect() {
  LinkTrace trace(Posture::Walk, 1);
  for (NodeId s = 0; s < kNodeCount; ++s) {
    for (NodeId d = 0; d < kNodeCount; ++d) {
      if (s != d) trace.set(0, s, d, LinkStat{0.0, 0.0});
    }
  }
  return trace;
}

}  // namespace wbansec
