// Copyright 2026 The SKA Authors.
//
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

#ifndef SKA_HTTP_SERVICE_H_
#define SKA_HTTP_SERVICE_H_

#include <memory>
#include <string>

#include "ska/error.h"
#include "ska/store.h"

namespace ska {

inline constexpr const char *kServiceVersion = "0.3.0";

// 409 for phase and state conflicts, 403 authorization, 404 unknown ids,
// 422 for everything else.
int http_status(ErrorKind kind);

// JSON API over a Store. All mutations go through Workspace, so protocol
// guards apply to every route.
class HttpService {
 public:
  explicit HttpService(Store &store);
  ~HttpService();
  HttpService(const HttpService &) = delete;
  HttpService &operator=(const HttpService &) = delete;

  // Returns the bound port; port 0 picks a free one. Throws on failure.
  int bind(const std::string &host, int port);
  // Blocks until stop().
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ska

#endif  // SKA_HTTP_SERVICE_H_
