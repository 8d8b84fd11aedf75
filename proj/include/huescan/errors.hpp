#pragma once

#include <stdexcept>
#include <string>

namespace huescan {

/// Base class for all errors raised by this library. Subtypes distinguish
/// bad input data (decode, parse, bounds) from batch-level failures; callers
/// that only need a yes/no can catch this base.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Byte stream is not a supported or well-formed raster image.
struct DecodeError : Error {
    using Error::Error;
};

/// Image decoded but contains zero opaque pixels.
struct EmptyImage : Error {
    using Error::Error;
};

/// Malformed text input (hex color, region string, config table).
struct ParseError : Error {
    using Error::Error;
};

/// Region rectangle extends outside the image bounds.
struct OutOfBounds : Error {
    using Error::Error;
};

/// Region rectangle is below the minimum analyzable area.
struct RegionTooSmall : Error {
    using Error::Error;
};

/// Corpus scan root cannot be opened or listed.
struct DirectoryUnreadable : Error {
    using Error::Error;
};

/// Fewer usable images than requested cluster count.
struct TooFewImages : Error {
    using Error::Error;
};

/// Requested sample size exceeds the available population.
struct SampleTooLarge : Error {
    using Error::Error;
};

/// Labels manifest is not valid `path,task,label` CSV.
struct ManifestParseError : Error {
    using Error::Error;
};

} // namespace huescan
