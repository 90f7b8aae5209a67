#pragma once

#include <cstdint>
#include <string_view>

namespace origami {

enum class Status : std::uint8_t {
  Ok,
  DivByZero,
  EmptyStructure,
  ConversionError,
  Overflow,
  BudgetExhausted,
  PerIterationBudget,
  IterationCapExceeded,
};

constexpr std::string_view status_name(Status s) {
  switch (s) {
    case Status::Ok:
      return "Ok";
    case Status::DivByZero:
      return "DivByZero";
    case Status::EmptyStructure:
      return "EmptyStructure";
    case Status::ConversionError:
      return "ConversionError";
    case Status::Overflow:
      return "Overflow";
    case Status::BudgetExhausted:
      return "BudgetExhausted";
    case Status::PerIterationBudget:
      return "PerIterationBudget";
    case Status::IterationCapExceeded:
      return "IterationCapExceeded";
  }
  return "?";
}

}  // namespace origami
