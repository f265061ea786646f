#pragma once

#include <stdexcept>
#include <string>

namespace planner {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// geometry
struct EmptyPath : Error { using Error::Error; };
struct PointOutOfRange : Error { using Error::Error; };
struct StationOutOfRange : Error { using Error::Error; };
struct CurvatureSingularity : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct DegenerateSpacing : Error { using Error::Error; };

// spline
struct DuplicateWaypoint : Error { using Error::Error; };
struct ParameterOutOfRange : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };

// bezier
struct DegenerateLeg : Error { using Error::Error; };
struct DistanceExceedsLeg : Error { using Error::Error; };
struct CornerOffLine : Error { using Error::Error; };
struct OverlappingCorners : Error { using Error::Error; };

// lateral planner
struct ZeroLength : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct EmptyGrid : Error { using Error::Error; };
struct TooFewSamples : Error { using Error::Error; };
struct NonpositiveSpeed : Error { using Error::Error; };
struct IndexNotBuilt : Error { using Error::Error; };
struct NoFeasibleTrajectory : Error { using Error::Error; };

// acc
struct NegativeSpeed : Error { using Error::Error; };
struct RiccatiDivergence : Error { using Error::Error; };
struct UnstabilizablePair : Error { using Error::Error; };
struct SingularInnovationCovariance : Error { using Error::Error; };

// sim
struct InvalidStep : Error { using Error::Error; };
struct EmptyTrace : Error { using Error::Error; };

// cli / scenario
struct ParseError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace planner
