/**
 * @file data_wrapper.hpp
 *
 * The Data Wrapper: the only way frames, kinematics and the colour table get
 * into the vision core. Each backend hands out value copies, so nothing the
 * backend does after next() returns can change a frame being processed.
 */

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "fieldvision/core/lut.hpp"
#include "fieldvision/core/types.hpp"
#include "fieldvision/platform/lut_file.hpp"
#include "fieldvision/platform/ppm.hpp"
#include "fieldvision/platform/stream.hpp"

namespace fv::platform {

class DataWrapper {
 public:
  virtual ~DataWrapper() = default;

  /// Next frame with the kinematics captured alongside it; nullopt at end of
  /// stream.
  virtual std::optional<FrameInput> next() = 0;
  virtual std::shared_ptr<const ColourLUT> lut() const = 0;
  virtual std::size_t frame_count() const = 0;
};

/// Frames held in memory, mostly for tests and in-process generation.
class MemoryBackend final : public DataWrapper {
 public:
  explicit MemoryBackend(std::vector<FrameInput> inputs,
                         std::shared_ptr<const ColourLUT> lut = default_lut())
      : inputs_(std::move(inputs)), lut_(std::move(lut)) {}

  std::optional<FrameInput> next() override {
    if (cursor_ >= inputs_.size()) return std::nullopt;
    return inputs_[cursor_++];
  }
  std::shared_ptr<const ColourLUT> lut() const override { return lut_; }
  std::size_t frame_count() const override { return inputs_.size(); }

  /// Direct access to the held inputs, e.g. to alter them after delivery.
  std::vector<FrameInput>& inputs() { return inputs_; }

 private:
  std::vector<FrameInput> inputs_;
  std::shared_ptr<const ColourLUT> lut_;
  std::size_t cursor_ = 0;
};

/// Shared manifest-order frame delivery for the replay backends.
class ReplayBackend : public DataWrapper {
 public:
  std::shared_ptr<const ColourLUT> lut() const override { return lut_; }
  std::size_t frame_count() const override { return info_.frame_count(); }
  const StreamInfo& info() const { return info_; }

  std::optional<FrameInput> next() override {
    if (cursor_ >= info_.frame_count()) return std::nullopt;
    const std::size_t seq = cursor_;
    Frame frame = read_ppm(info_.frame_path(seq));
    if (frame.width() != info_.manifest.width || frame.height() != info_.manifest.height)
      throw FrameFormatError(info_.frame_path(seq).string() + ": dimensions differ from manifest");
    const double period_us = 1e6 / info_.manifest.fps;
    frame.set_sequence(seq, static_cast<std::uint64_t>(std::llround(seq * period_us)));
    ++cursor_;
    return FrameInput{std::move(frame), kinematics_for(seq)};
  }

 protected:
  ReplayBackend(StreamInfo info, std::shared_ptr<const ColourLUT> lut)
      : info_(std::move(info)), lut_(lut ? std::move(lut) : default_lut()) {}

  virtual KinematicsSnapshot kinematics_for(std::size_t seq) const = 0;

 private:
  StreamInfo info_;
  std::shared_ptr<const ColourLUT> lut_;
  std::size_t cursor_ = 0;
};

/// Replay with the kinematics sidecar when present. Frames without a sidecar
/// record, or streams without a sidecar, get an invalid snapshot.
class KinematicReplayBackend final : public ReplayBackend {
 public:
  explicit KinematicReplayBackend(const std::filesystem::path& dir,
                                  std::shared_ptr<const ColourLUT> lut = nullptr,
                                  const StreamOptions& options = {})
      : ReplayBackend(open_stream(dir, options), std::move(lut)) {
    if (info().has_kinematics) sidecar_ = read_kinematics(info().dir / kKinematicsName);
  }

 protected:
  KinematicsSnapshot kinematics_for(std::size_t seq) const override {
    auto it = sidecar_.find(seq);
    return it == sidecar_.end() ? KinematicsSnapshot{} : it->second;
  }

 private:
  std::map<std::uint64_t, KinematicsSnapshot> sidecar_;
};

/// Replay for a platform with no kinematic chain: the horizon is always the
/// top edge of the frame.
class HeadlessReplayBackend final : public ReplayBackend {
 public:
  explicit HeadlessReplayBackend(const std::filesystem::path& dir,
                                 std::shared_ptr<const ColourLUT> lut = nullptr,
                                 const StreamOptions& options = {})
      : ReplayBackend(open_stream(dir, options), std::move(lut)) {}

 protected:
  KinematicsSnapshot kinematics_for(std::size_t) const override { return KinematicsSnapshot{}; }
};

enum class BackendKind { Kinematic, Headless };

inline std::unique_ptr<ReplayBackend> open_replay(BackendKind kind, const std::filesystem::path& dir,
                                                  std::shared_ptr<const ColourLUT> lut = nullptr) {
  if (kind == BackendKind::Headless) return std::make_unique<HeadlessReplayBackend>(dir, std::move(lut));
  return std::make_unique<KinematicReplayBackend>(dir, std::move(lut));
}

}  // namespace fv::platform
