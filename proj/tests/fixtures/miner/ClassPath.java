package com.google.common.reflect;

public class ClassPath {
    // TODO: Try java.nio.file.Paths#get() when Guava drops JDK 6 support.
    String getResourceName() {
        return null;
    }
}
