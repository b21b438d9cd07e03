/* Copyright 2026 The rfglove Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// HTTP + WebSocket front end for SessionManager on a single port, one
// thread per connection.

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>

#include "rfglove/service.hpp"

namespace rfglove {

/// Port from RFGLOVE_PORT if set and valid, else `fallback`.
std::uint16_t default_port(std::uint16_t fallback = 8080);

class Server {
public:
    /// Binds immediately; port 0 picks a free port. Throws std::runtime_error
    /// if the address cannot be bound.
    Server(SessionManager& sessions, const std::string& address, std::uint16_t port);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    std::uint16_t port() const noexcept;

    /// Accepts connections on a background thread.
    void start();
    /// Accepts on the calling thread until stop() is called.
    void run();
    /// Closes the listener and every open connection, then joins.
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace rfglove
