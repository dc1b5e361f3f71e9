// Copyright 2026 The bitext-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

#include <stdexcept>

namespace forge {

// Root of the error taxonomy.  Everything thrown on purpose derives from
// this, so the CLI boundary can catch forge::Error and map it to exit
// code 1 while genuine bugs (std::logic_error etc.) stay loud.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FORGE_ERROR_TYPE(NAME) \
  class NAME : public Error {  \
   public:                     \
    using Error::Error;        \
  }

FORGE_ERROR_TYPE(UnknownLanguageError);
FORGE_ERROR_TYPE(SameLanguageError);
FORGE_ERROR_TYPE(EmptyTextError);
FORGE_ERROR_TYPE(EmptyCorpusError);
FORGE_ERROR_TYPE(InvalidSmoothingError);
FORGE_ERROR_TYPE(DegenerateLengthError);
FORGE_ERROR_TYPE(TargetTooSmallError);
FORGE_ERROR_TYPE(IoError);
FORGE_ERROR_TYPE(FormatError);
FORGE_ERROR_TYPE(BackendUnavailableError);
FORGE_ERROR_TYPE(UnsupportedTargetError);
FORGE_ERROR_TYPE(LengthMismatchError);
FORGE_ERROR_TYPE(EmptyReferenceError);
FORGE_ERROR_TYPE(EmptyReferenceSetError);
FORGE_ERROR_TYPE(LineCountMismatchError);
FORGE_ERROR_TYPE(EmptyEvalSetError);

#undef FORGE_ERROR_TYPE

}  // namespace forge
