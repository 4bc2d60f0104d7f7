// Copyright 2026 The garment3d Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "garment/types.hpp"

#include "garment/error.hpp"

namespace garment {

std::string_view to_string(GarmentType t) {
  return t == GarmentType::tshirt ? "tshirt" : "pants";
}

std::string_view to_string(View v) { return v == View::front ? "front" : "back"; }

std::string_view to_string(CaptureMode m) {
  return m == CaptureMode::mannequin ? "mannequin" : "flat_lay";
}

GarmentType parse_garment_type(std::string_view s) {
  if (s == "tshirt") return GarmentType::tshirt;
  if (s == "pants") return GarmentType::pants;
  throw SchemaError("garment_type", "unknown garment type '" + std::string(s) + "'");
}

View parse_view(std::string_view s) {
  if (s == "front") return View::front;
  if (s == "back") return View::back;
  throw SchemaError("view", "unknown view '" + std::string(s) + "'");
}

CaptureMode parse_capture_mode(std::string_view s) {
  if (s == "mannequin") return CaptureMode::mannequin;
  if (s == "flat_lay") return CaptureMode::flat_lay;
  throw SchemaError("capture_mode", "unknown capture mode '" + std::string(s) + "'");
}

}  // namespace garment
