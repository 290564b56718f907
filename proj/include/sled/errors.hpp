#pragma once

#include <stdexcept>
#include <string>

namespace sled {

/// Errors raised by the segmentation library. All derive from std::runtime_error
/// so callers can catch coarsely at the batch level.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateImage : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptySuperpixel : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DisconnectedNode : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyGraph : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TooFewSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingleRegion : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AllScalesDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateHistogram : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyMask : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sled
