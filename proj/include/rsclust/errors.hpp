#pragma once

#include <stdexcept>
#include <string>

namespace rsclust {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// distance
struct AsymmetricMatrix : Error { using Error::Error; };
struct NegativeDistance : Error { using Error::Error; };
struct NonzeroDiagonal : Error { using Error::Error; };

// sct / hierarchy
struct IsolatedEntity : Error { using Error::Error; };
struct NotAMember : Error { using Error::Error; };
struct BadAlpha : Error { using Error::Error; };
struct InfiniteBaseDistance : Error { using Error::Error; };
struct IterationOutOfRange : Error { using Error::Error; };

// metrics
struct MismatchedEntities : Error { using Error::Error; };

// netcluster
struct DisconnectedGraph : Error { using Error::Error; };

// baselines
struct InfiniteDistance : Error { using Error::Error; };
struct BadK : Error { using Error::Error; };

// io
struct RaggedRows : Error { using Error::Error; };
struct NonNumericField : Error { using Error::Error; };
struct EmptyFile : Error { using Error::Error; };
struct SelfLoop : Error { using Error::Error; };
struct NonPositiveWeight : Error { using Error::Error; };
struct MalformedLine : Error { using Error::Error; };
struct NotSquare : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace rsclust
