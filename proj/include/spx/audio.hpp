#pragma once

#include <string>
#include <vector>

namespace spx {

// Mono sample buffer, the universal currency of the pipeline.
// Amplitudes are dimensionless with nominal range [-1, 1].
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = 0;

  AudioSignal() = default;
  AudioSignal(std::vector<double> s, int rate)
      : samples(std::move(s)), sample_rate(rate) {}

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

enum class WavEncoding { pcm16, float32 };

// Reads a RIFF/WAVE file (PCM-16 or IEEE float-32). Multi-channel input
// takes channel 0; a warning is printed to stderr unless suppressed.
AudioSignal load_wav(const std::string& path);

// Writes a mono WAV file. pcm16 clamps to [-1, 1] and rounds half away
// from zero so golden files are bit-exact.
void save_wav(const AudioSignal& signal, const std::string& path,
              WavEncoding encoding = WavEncoding::float32);

// Polyphase windowed-sinc resampler (Kaiser window, half-length 32 taps
// per phase, cutoff 0.45 x the lower of the two rates). Same-rate calls
// are the exact identity. The operator is linear; adjoint() applies its
// transpose, which the STOI loss needs for backpropagation.
class Resampler {
 public:
  Resampler(int source_rate, int target_rate);

  std::vector<double> forward(const std::vector<double>& x) const;
  // Transpose of forward: maps a gradient w.r.t. the output back to a
  // gradient w.r.t. an input of length input_length.
  std::vector<double> adjoint(const std::vector<double>& grad_out,
                              std::size_t input_length) const;

  std::size_t output_length(std::size_t input_length) const;

  int source_rate() const { return source_rate_; }
  int target_rate() const { return target_rate_; }

 private:
  int source_rate_;
  int target_rate_;
  int up_ = 1;
  int down_ = 1;
  int half_ = 0;                // taps on each side of center, in up-domain
  std::vector<double> taps_;    // length 2*half_ + 1, centered
};

AudioSignal resample(const AudioSignal& signal, int target_rate);

double energy(const std::vector<double>& x);
double rms(const std::vector<double>& x);
bool all_finite(const std::vector<double>& x);

}  // namespace spx
