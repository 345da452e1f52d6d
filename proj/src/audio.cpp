#include "spx/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numeric>

#include "spx/error.hpp"

namespace spx {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void write_u32(std::ostream& os, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

void write_u16(std::ostream& os, uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF)};
  os.write(reinterpret_cast<const char*>(b), 2);
}

long floor_div(long a, long b) {
  long q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

// Zeroth-order modified Bessel function, power series.
double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double half_x = x / 2.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half_x / k) * (half_x / k);
    sum += term;
    if (term < 1e-16 * sum) break;
  }
  return sum;
}

}  // namespace

AudioSignal load_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("not a RIFF/WAVE file: " + path);
  }

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* pcm = nullptr;
  std::size_t pcm_bytes = 0;

  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const char* id = reinterpret_cast<const char*>(data.data() + pos);
    uint32_t size = read_u32(data.data() + pos + 4);
    pos += 8;
    if (pos + size > data.size()) {
      throw FormatError("truncated chunk in " + path);
    }
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) throw FormatError("fmt chunk too small in " + path);
      format = read_u16(data.data() + pos);
      channels = read_u16(data.data() + pos + 2);
      rate = read_u32(data.data() + pos + 4);
      bits = read_u16(data.data() + pos + 14);
      if (format == kFormatExtensible && size >= 40) {
        // subformat GUID starts with the base format tag
        format = read_u16(data.data() + pos + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      pcm = data.data() + pos;
      pcm_bytes = size;
    }
    pos += size + (size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || pcm == nullptr) {
    throw FormatError("missing fmt/data chunk in " + path);
  }
  if (channels == 0 || rate == 0) {
    throw FormatError("bad fmt fields in " + path);
  }
  const bool is_pcm16 = (format == kFormatPcm && bits == 16);
  const bool is_f32 = (format == kFormatFloat && bits == 32);
  if (!is_pcm16 && !is_f32) {
    throw UnsupportedCodecError("unsupported encoding (format tag " +
                                std::to_string(format) + ", " +
                                std::to_string(bits) + " bit) in " + path);
  }
  if (channels > 1) {
    std::cerr << "warning: " << path << " has " << channels
              << " channels; taking channel 0\n";
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t num_frames = pcm_bytes / frame_bytes;

  AudioSignal out;
  out.sample_rate = static_cast<int>(rate);
  out.samples.resize(num_frames);
  for (std::size_t i = 0; i < num_frames; ++i) {
    const unsigned char* p = pcm + i * frame_bytes;
    if (is_pcm16) {
      int16_t v = static_cast<int16_t>(read_u16(p));
      out.samples[i] = v / 32768.0;
    } else {
      uint32_t u = read_u32(p);
      float v;
      std::memcpy(&v, &u, 4);
      out.samples[i] = v;
    }
  }
  if (!all_finite(out.samples)) {
    throw NumericalError("non-finite samples in " + path);
  }
  return out;
}

void save_wav(const AudioSignal& signal, const std::string& path,
              WavEncoding encoding) {
  if (signal.samples.empty()) {
    throw InvalidInputError("refusing to write empty signal to " + path);
  }
  if (signal.sample_rate <= 0) {
    throw InvalidInputError("bad sample rate writing " + path);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);

  const bool pcm = (encoding == WavEncoding::pcm16);
  const uint32_t bytes_per_sample = pcm ? 2 : 4;
  const uint32_t data_bytes =
      static_cast<uint32_t>(signal.samples.size()) * bytes_per_sample;

  f.write("RIFF", 4);
  write_u32(f, 36 + data_bytes);
  f.write("WAVE", 4);
  f.write("fmt ", 4);
  write_u32(f, 16);
  write_u16(f, pcm ? kFormatPcm : kFormatFloat);
  write_u16(f, 1);  // mono
  write_u32(f, static_cast<uint32_t>(signal.sample_rate));
  write_u32(f, static_cast<uint32_t>(signal.sample_rate) * bytes_per_sample);
  write_u16(f, static_cast<uint16_t>(bytes_per_sample));
  write_u16(f, pcm ? 16 : 32);
  f.write("data", 4);
  write_u32(f, data_bytes);

  for (double s : signal.samples) {
    if (pcm) {
      double clamped = std::clamp(s, -1.0, 1.0);
      // round half away from zero
      double scaled = clamped * 32768.0;
      long v = static_cast<long>(scaled >= 0 ? std::floor(scaled + 0.5)
                                             : std::ceil(scaled - 0.5));
      v = std::clamp(v, -32768L, 32767L);
      write_u16(f, static_cast<uint16_t>(static_cast<int16_t>(v)));
    } else {
      float v = static_cast<float>(s);
      uint32_t u;
      std::memcpy(&u, &v, 4);
      write_u32(f, u);
    }
  }
  if (!f) throw IoError("write failed for " + path);
}

Resampler::Resampler(int source_rate, int target_rate)
    : source_rate_(source_rate), target_rate_(target_rate) {
  if (source_rate <= 0 || target_rate <= 0) {
    throw ConfigError("resampler rates must be positive");
  }
  if (source_rate == target_rate) return;  // identity path

  int g = std::gcd(source_rate, target_rate);
  up_ = target_rate / g;
  down_ = source_rate / g;

  // Filter runs at rate source_rate * up_. Cutoff 0.45 x the lower rate
  // (0.9 of its Nyquist), Kaiser beta 8.6, half-length 32 taps per phase.
  const double fs_up = static_cast<double>(source_rate) * up_;
  const double cutoff_hz = 0.45 * std::min(source_rate, target_rate);
  const double fc = cutoff_hz / fs_up;  // normalized (cycles/sample)
  half_ = 32 * up_;
  const double beta = 8.6;
  const double i0b = bessel_i0(beta);
  taps_.resize(2 * half_ + 1);
  for (int n = -half_; n <= half_; ++n) {
    const double frac = static_cast<double>(n) / half_;
    const double w = bessel_i0(beta * std::sqrt(1.0 - frac * frac)) / i0b;
    taps_[n + half_] = 2.0 * fc * sinc(2.0 * fc * n) * w;
  }
}

std::size_t Resampler::output_length(std::size_t input_length) const {
  return static_cast<std::size_t>(std::llround(
      static_cast<double>(input_length) * target_rate_ / source_rate_));
}

std::vector<double> Resampler::forward(const std::vector<double>& x) const {
  if (source_rate_ == target_rate_) return x;
  const std::size_t out_len = output_length(x.size());
  std::vector<double> y(out_len, 0.0);
  const long n = static_cast<long>(x.size());
  for (std::size_t m = 0; m < out_len; ++m) {
    const long p = static_cast<long>(m) * down_;  // position in up-domain
    long j_lo = std::max(ceil_div(p - half_, up_), 0L);
    long j_hi = floor_div(p + half_, up_);
    j_hi = std::min(j_hi, n - 1);
    double acc = 0.0;
    for (long j = j_lo; j <= j_hi; ++j) {
      acc += x[j] * taps_[half_ + p - j * up_];
    }
    y[m] = acc * up_;
  }
  return y;
}

std::vector<double> Resampler::adjoint(const std::vector<double>& grad_out,
                                       std::size_t input_length) const {
  if (source_rate_ == target_rate_) return grad_out;
  std::vector<double> gx(input_length, 0.0);
  const long n = static_cast<long>(input_length);
  for (std::size_t m = 0; m < grad_out.size(); ++m) {
    const long p = static_cast<long>(m) * down_;
    long j_lo = std::max(ceil_div(p - half_, up_), 0L);
    long j_hi = floor_div(p + half_, up_);
    j_hi = std::min(j_hi, n - 1);
    const double g = grad_out[m] * up_;
    for (long j = j_lo; j <= j_hi; ++j) {
      gx[j] += g * taps_[half_ + p - j * up_];
    }
  }
  return gx;
}

AudioSignal resample(const AudioSignal& signal, int target_rate) {
  if (target_rate <= 0) throw ConfigError("target rate must be positive");
  if (signal.sample_rate == target_rate) return signal;
  Resampler rs(signal.sample_rate, target_rate);
  return AudioSignal(rs.forward(signal.samples), target_rate);
}

double energy(const std::vector<double>& x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double rms(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  return std::sqrt(energy(x) / x.size());
}

bool all_finite(const std::vector<double>& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace spx
