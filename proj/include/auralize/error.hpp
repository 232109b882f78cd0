#ifndef AURALIZE_ERROR_HPP
#define AURALIZE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace auralize {

// Every failure the library reports carries one of these codes. The split
// matters to callers: is_io_error() distinguishes file/parse/config trouble
// from domain errors, which the CLI maps to exit codes 1 and 2 respectively.
enum class Errc {
    // geometry / localization
    NonPositiveDepth,
    OutOfBounds,
    BehindCamera,
    EmptyPatch,
    FrameMismatch,
    AllNoise,
    InvalidRotation,
    DegenerateRotation,
    // acoustics / renderer
    DegenerateRoom,
    UnreachableT60,
    SourceOutsideRoom,
    SourceAtMic,
    MicOutsideRoom,
    SampleRateMismatch,
    EmptyAudio,
    ChannelMismatch,
    AccumulatorTooShort,
    EmptyTrajectory,
    NonMonotoneTime,
    InvalidArgument,
    // io / config
    FileError,
    CorruptHeader,
    UnsupportedEncoding,
    TruncatedPayload,
    MalformedLine,
    NonMonotoneIndex,
    BadBottomRow,
    HeaderMismatch,
    UnknownKey,
    RangeViolation,
    MissingInput,
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::NonPositiveDepth: return "NonPositiveDepth";
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::BehindCamera: return "BehindCamera";
    case Errc::EmptyPatch: return "EmptyPatch";
    case Errc::FrameMismatch: return "FrameMismatch";
    case Errc::AllNoise: return "AllNoise";
    case Errc::InvalidRotation: return "InvalidRotation";
    case Errc::DegenerateRotation: return "DegenerateRotation";
    case Errc::DegenerateRoom: return "DegenerateRoom";
    case Errc::UnreachableT60: return "UnreachableT60";
    case Errc::SourceOutsideRoom: return "SourceOutsideRoom";
    case Errc::SourceAtMic: return "SourceAtMic";
    case Errc::MicOutsideRoom: return "MicOutsideRoom";
    case Errc::SampleRateMismatch: return "SampleRateMismatch";
    case Errc::EmptyAudio: return "EmptyAudio";
    case Errc::ChannelMismatch: return "ChannelMismatch";
    case Errc::AccumulatorTooShort: return "AccumulatorTooShort";
    case Errc::EmptyTrajectory: return "EmptyTrajectory";
    case Errc::NonMonotoneTime: return "NonMonotoneTime";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::FileError: return "FileError";
    case Errc::CorruptHeader: return "CorruptHeader";
    case Errc::UnsupportedEncoding: return "UnsupportedEncoding";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::NonMonotoneIndex: return "NonMonotoneIndex";
    case Errc::BadBottomRow: return "BadBottomRow";
    case Errc::HeaderMismatch: return "HeaderMismatch";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::RangeViolation: return "RangeViolation";
    case Errc::MissingInput: return "MissingInput";
    }
    return "Unknown";
}

// True for failures caused by files, parsing or configuration, as opposed to
// invalid scene/signal parameters.
inline bool is_io_error(Errc c) {
    switch (c) {
    case Errc::FileError:
    case Errc::CorruptHeader:
    case Errc::UnsupportedEncoding:
    case Errc::TruncatedPayload:
    case Errc::MalformedLine:
    case Errc::NonMonotoneIndex:
    case Errc::BadBottomRow:
    case Errc::HeaderMismatch:
    case Errc::UnknownKey:
    case Errc::RangeViolation:
    case Errc::MissingInput:
        return true;
    default:
        return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace auralize

#endif
