#include "temper/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace temper {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buf, res.ptr);
}

std::string format_flag(bool b) { return b ? "1" : "0"; }

}  // namespace temper
