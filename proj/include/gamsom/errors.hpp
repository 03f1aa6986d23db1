// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAMSOM_ERRORS_HPP
#define GAMSOM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gamsom {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GAMSOM_DEFINE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

GAMSOM_DEFINE_ERROR(ParseError);
GAMSOM_DEFINE_ERROR(ValidationError);
GAMSOM_DEFINE_ERROR(IoError);
GAMSOM_DEFINE_ERROR(UnsupportedFormat);
GAMSOM_DEFINE_ERROR(TooShort);
GAMSOM_DEFINE_ERROR(TooFewFrames);
GAMSOM_DEFINE_ERROR(SilentInput);
GAMSOM_DEFINE_ERROR(SilentFrame);
GAMSOM_DEFINE_ERROR(AllSilent);
GAMSOM_DEFINE_ERROR(MissingFeature);
GAMSOM_DEFINE_ERROR(MixedSampleRates);
GAMSOM_DEFINE_ERROR(DegenerateDimension);
GAMSOM_DEFINE_ERROR(InvalidParams);
GAMSOM_DEFINE_ERROR(DimMismatch);
GAMSOM_DEFINE_ERROR(InvalidDegree);
GAMSOM_DEFINE_ERROR(InvalidSpec);
GAMSOM_DEFINE_ERROR(InconsistentInputs);
GAMSOM_DEFINE_ERROR(MissingValue);
GAMSOM_DEFINE_ERROR(ProvenanceMismatch);

#undef GAMSOM_DEFINE_ERROR

}  // namespace gamsom

#endif  // GAMSOM_ERRORS_HPP
