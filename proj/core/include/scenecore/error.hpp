// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace scenecore {

/// Error category, mapped to process exit codes by the CLI
/// (input = 2, numeric = 3, io = 4).
enum class ErrorKind { input, numeric, io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

#define SCENECORE_DEFINE_ERROR(name, kind)                        \
    class name : public Error {                                   \
    public:                                                       \
        explicit name(const std::string& what = #name)            \
            : Error(ErrorKind::kind, std::string(#name ": ") + what) {} \
    }

// camera
SCENECORE_DEFINE_ERROR(EmptyTrajectory, input);
SCENECORE_DEFINE_ERROR(PixelOutOfBounds, input);
SCENECORE_DEFINE_ERROR(InvalidFrameCount, input);
SCENECORE_DEFINE_ERROR(AmbiguousGeodesic, numeric);
SCENECORE_DEFINE_ERROR(StepOutOfRange, input);

// epipolar
SCENECORE_DEFINE_ERROR(DegenerateBaseline, numeric);
SCENECORE_DEFINE_ERROR(EpipoleQuery, numeric);

// scale alignment / warping
SCENECORE_DEFINE_ERROR(InsufficientOverlap, numeric);
SCENECORE_DEFINE_ERROR(DegenerateDepth, numeric);
SCENECORE_DEFINE_ERROR(ShapeMismatch, input);

// gaussian fitting
SCENECORE_DEFINE_ERROR(DivergenceError, numeric);

// sequence model
SCENECORE_DEFINE_ERROR(LayoutMismatch, input);

// metrics
SCENECORE_DEFINE_ERROR(LengthMismatch, input);
SCENECORE_DEFINE_ERROR(StaticTrajectory, numeric);
SCENECORE_DEFINE_ERROR(ImageTooSmall, input);

// file ingestion
SCENECORE_DEFINE_ERROR(ParseError, input);
SCENECORE_DEFINE_ERROR(IoError, io);

#undef SCENECORE_DEFINE_ERROR

}  // namespace scenecore
