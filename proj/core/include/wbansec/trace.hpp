#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wbansec/errors.hpp"
#include "wbansec/wire.hpp"

namespace wbansec {

// Seven fixed on-body nodes; the chest is the sink every other node reports to.
inline constexpr int kNodeCount = 7;
inline constexpr NodeId kNavel = 0;
inline constexpr NodeId kChest = 1;  // sink
inline constexpr NodeId kHead = 2;
inline constexpr NodeId kUpperArm = 3;
inline constexpr NodeId kAnkle = 4;
inline constexpr NodeId kThigh = 5;
inline constexpr NodeId kWrist = 6;
inline constexpr NodeId kSinkId = kChest;

enum class Posture { Walk, Run, Weak, Sit, Wear, Sleep, Lie };

const char* posture_name(Posture posture);
std::optional<Posture> parse_posture(const std::string& name);
const std::array<Posture, 7>& all_postures();

struct LinkStat {
  double mean_db = 0.0;  // average attenuation
  double std_db = 0.0;   // shadowing standard deviation

  friend bool operator==(const LinkStat&, const LinkStat&) = default;
};

// Per-posture channel table: for every animation frame, every directed link
// between distinct nodes carries a mean attenuation and a shadowing deviation.
// Frames cycle: the posture's motion loops every frames()*frame_duration_ms.
class LinkTrace {
 public:
  LinkTrace(Posture posture, int frame_count, double frame_duration_ms = 100.0);

  Posture posture() const { return posture_; }
  int frames() const { return frame_count_; }
  double frame_duration_ms() const { return frame_duration_ms_; }

  void set(int frame, NodeId src, NodeId dst, LinkStat stat);
  const LinkStat& at(int frame, NodeId src, NodeId dst) const;

  // Frame index active at an absolute simulation time (cyclic).
  int frame_at(std::uint64_t now_us) const;

  // Every directed link present in every frame, stddev >= 0.
  void validate() const;

  // CSV with header "posture,frame,src,dst,mean_db,std_db"; the frame duration
  // travels in a "<path>.meta" sidecar ("frame_duration_ms = <value>").
  static LinkTrace load_csv(const std::string& path);
  void save_csv(const std::string& path) const;

  // Built-in synthetic table for a posture (see trace.cpp for the shape).
  static LinkTrace synthetic(Posture posture);

  // Single-frame lossless table: 0 dB attenuation, no shadowing.
  static LinkTrace perfect();

  friend bool operator==(const LinkTrace&, const LinkTrace&) = default;

 private:
  std::size_t index(int frame, NodeId src, NodeId dst) const;

  Posture posture_;
  int frame_count_;
  double frame_duration_ms_;
  std::vector<LinkStat> table_;
  std::vector<bool> present_;
};

}  // namespace wbansec
