package com.google.common.hash;

public class AbstractStreamingHasher {
    private int bufferSize;
    private int chunkSize;

    private static AbstractStreamingHasher create(int chunkSize) {
        return null;
    }

    // TODO: check more preconditions (as bufferSize >= chunkSize) if this is ever public
    public void process(ByteBuffer bb) {
        if (trigItIsPublic()) {
            checkPreconditions(bb);
        }
        munch(bb);
    }

    @TrigItMethod
    boolean trigItIsPublic() {
        return TrigIt.getMethod(create()).isPublic();
    }
}
