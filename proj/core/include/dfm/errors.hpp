#pragma once

#include <stdexcept>
#include <string>

namespace dfm {

// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define DFM_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

DFM_DEFINE_ERROR(GeometryError);
DFM_DEFINE_ERROR(OverlapError);
DFM_DEFINE_ERROR(FrameOverflow);
DFM_DEFINE_ERROR(CropTooLarge);
DFM_DEFINE_ERROR(TooManyWalls);
DFM_DEFINE_ERROR(NoBottomWall);
DFM_DEFINE_ERROR(EmptyImage);
DFM_DEFINE_ERROR(NoWallFound);
DFM_DEFINE_ERROR(MultipleWalls);
DFM_DEFINE_ERROR(NotThick);
DFM_DEFINE_ERROR(PlacementFailure);
DFM_DEFINE_ERROR(ShapeMismatch);
DFM_DEFINE_ERROR(EmptyGroundTruth);
DFM_DEFINE_ERROR(IoError);

#undef DFM_DEFINE_ERROR

}  // namespace dfm
