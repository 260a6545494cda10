package com.google.common.hash;

public class AbstractStreamingHasher {
    // TODO: check more preconditions (as bufferSize >= chunkSize) if this is ever public
    void process() { }
}
