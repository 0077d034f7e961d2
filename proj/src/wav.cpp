#include "rapport/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "rapport/error.hpp"

namespace rapport {
namespace {

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<unsigned char>& v, std::uint32_t x) {
    v.push_back(static_cast<unsigned char>(x & 0xff));
    v.push_back(static_cast<unsigned char>((x >> 8) & 0xff));
    v.push_back(static_cast<unsigned char>((x >> 16) & 0xff));
    v.push_back(static_cast<unsigned char>((x >> 24) & 0xff));
}

void put_u16(std::vector<unsigned char>& v, std::uint16_t x) {
    v.push_back(static_cast<unsigned char>(x & 0xff));
    v.push_back(static_cast<unsigned char>((x >> 8) & 0xff));
}

}  // namespace

AudioTrack read_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("wav: cannot open '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw InputError("wav: '" + path + "' is not a RIFF/WAVE file");

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const unsigned char* data = nullptr;
    std::uint32_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t len = read_u32(bytes.data() + pos + 4);
        const std::size_t body = pos + 8;
        if (body + len > bytes.size())
            throw InputError("wav: '" + path + "' has a truncated chunk");
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (len < 16) throw InputError("wav: '" + path + "' fmt chunk too short");
            format = read_u16(bytes.data() + body);
            channels = read_u16(bytes.data() + body + 2);
            rate = read_u32(bytes.data() + body + 4);
            bits = read_u16(bytes.data() + body + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = bytes.data() + body;
            data_len = len;
        }
        pos = body + len + (len % 2);  // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr)
        throw InputError("wav: '" + path + "' is missing fmt or data chunk");
    if (format != 1) throw InputError("wav: '" + path + "' is not PCM (format tag " +
                                      std::to_string(format) + ")");
    if (channels != 1)
        throw InputError("wav: '" + path + "' has " + std::to_string(channels) +
                         " channels, expected mono");
    if (bits != 16)
        throw InputError("wav: '" + path + "' has " + std::to_string(bits) +
                         "-bit samples, expected 16");
    if (rate < 8000)
        throw InputError("wav: '" + path + "' sample rate " + std::to_string(rate) + " < 8000 Hz");

    AudioTrack track;
    track.sample_rate = static_cast<int>(rate);
    const std::size_t n = data_len / 2;
    track.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int16_t s =
            static_cast<std::int16_t>(data[2 * i] | (data[2 * i + 1] << 8));
        track.samples[i] = static_cast<float>(s) / 32768.0f;
    }
    return track;
}

void write_wav(const std::string& path, const AudioTrack& track) {
    if (track.sample_rate < 8000) throw InputError("wav: sample rate must be >= 8000 Hz");
    std::vector<unsigned char> bytes;
    const std::uint32_t n = static_cast<std::uint32_t>(track.samples.size());
    const std::uint32_t data_len = n * 2;
    bytes.reserve(44 + data_len);
    const char* riff = "RIFF";
    bytes.insert(bytes.end(), riff, riff + 4);
    put_u32(bytes, 36 + data_len);
    const char* wavefmt = "WAVEfmt ";
    bytes.insert(bytes.end(), wavefmt, wavefmt + 8);
    put_u32(bytes, 16);
    put_u16(bytes, 1);  // PCM
    put_u16(bytes, 1);  // mono
    put_u32(bytes, static_cast<std::uint32_t>(track.sample_rate));
    put_u32(bytes, static_cast<std::uint32_t>(track.sample_rate) * 2);
    put_u16(bytes, 2);   // block align
    put_u16(bytes, 16);  // bits
    const char* dataid = "data";
    bytes.insert(bytes.end(), dataid, dataid + 4);
    put_u32(bytes, data_len);
    for (std::size_t i = 0; i < n; ++i) {
        const float clamped = std::clamp(track.samples[i], -1.0f, 1.0f);
        const std::int16_t s = static_cast<std::int16_t>(std::lround(clamped * 32767.0f));
        bytes.push_back(static_cast<unsigned char>(s & 0xff));
        bytes.push_back(static_cast<unsigned char>((s >> 8) & 0xff));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("wav: cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<long>(bytes.size()));
    if (!out) throw InputError("wav: write failed for '" + path + "'");
}

}  // namespace rapport
