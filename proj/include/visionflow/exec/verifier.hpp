#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "visionflow/exec/types.hpp"

namespace visionflow::exec {

class Verifier {
 public:
  virtual ~Verifier() = default;
  /// `ground` is null when no synthetic ground truth exists for the image.
  /// Throws Error(VerifierUnavailable).
  virtual VerifierScoreRecord verify(const ExecOutput& output, const ExecInput& input, const SceneSpec* ground) = 0;
};

/// Ground-truth verifier. Locate: Jaccard of the union of predicted boxes
/// against the rasterized target. Segment: same with the union of masks.
/// Generate/Edit/Caption/Classify: 1 if the expected payload is present.
/// Integrate: always 1.
class MockVerifier final : public Verifier {
 public:
  VerifierScoreRecord verify(const ExecOutput& output, const ExecInput& input, const SceneSpec* ground) override;
};

/// POST {endpoint}/v1/verify with the produced (or input) image and the
/// request text; expects {"score": num} in [0,1].
class RemoteVerifier final : public Verifier {
 public:
  RemoteVerifier(std::string endpoint, std::chrono::milliseconds deadline = std::chrono::seconds(120))
      : endpoint_(std::move(endpoint)), deadline_(deadline) {}
  VerifierScoreRecord verify(const ExecOutput& output, const ExecInput& input, const SceneSpec* ground) override;

 private:
  std::string endpoint_;
  std::chrono::milliseconds deadline_;
};

/// Ground truth when available, otherwise the remote verifier if one is
/// configured. With neither, scores payload presence only ("payload"
/// method); Locate/Segment/Classify are accepted as-is since an empty result
/// cannot be judged without ground truth.
class DefaultVerifier final : public Verifier {
 public:
  explicit DefaultVerifier(std::optional<std::string> remote_endpoint = std::nullopt,
                           std::chrono::milliseconds deadline = std::chrono::seconds(120));
  VerifierScoreRecord verify(const ExecOutput& output, const ExecInput& input, const SceneSpec* ground) override;

 private:
  MockVerifier mock_;
  std::optional<RemoteVerifier> remote_;
};

/// Text sent to a vision-text verifier for this input.
std::string verification_text(const ExecInput& input);

}  // namespace visionflow::exec
