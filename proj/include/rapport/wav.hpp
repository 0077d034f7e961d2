#pragma once

// Minimal RIFF/WAVE reader/writer for 16-bit PCM mono, the only format the
// recording rig produces. Unknown chunks are skipped; anything else is a
// named input error.

#include <string>

#include "rapport/vad.hpp"

namespace rapport {

AudioTrack read_wav(const std::string& path);
void write_wav(const std::string& path, const AudioTrack& track);

}  // namespace rapport
