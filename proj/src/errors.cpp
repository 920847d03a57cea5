#include "carpets/errors.hpp"

namespace carpets {

const char* err_name(Err code) {
  switch (code) {
    case Err::EmptyDigitSet:
      return "EmptyDigitSet";
    case Err::DigitOutOfRange:
      return "DigitOutOfRange";
    case Err::BaseOrderViolation:
      return "BaseOrderViolation";
    case Err::DuplicateCell:
      return "DuplicateCell";
    case Err::WidthNotLessThanHeight:
      return "WidthNotLessThanHeight";
    case Err::OverlapViolation:
      return "OverlapViolation";
    case Err::MassViolation:
      return "MassViolation";
    case Err::SelfSimilarNotEmbeddable:
      return "SelfSimilarNotEmbeddable";
    case Err::NoRoot:
      return "NoRoot";
    case Err::OuterMissesCarpet:
      return "OuterMissesCarpet";
    case Err::BudgetExceeded:
      return "BudgetExceeded";
    case Err::AmbientMismatch:
      return "AmbientMismatch";
    case Err::SelfSimilarUnsupported:
      return "SelfSimilarUnsupported";
    case Err::RegionEmpty:
      return "RegionEmpty";
    case Err::ParseError:
      return "ParseError";
  }
  return "UnknownError";
}

}  // namespace carpets
