package org.demo.util;

public final class Strings {
    private Strings() {
    }

    public static boolean isBlank(String s) {
        return s == null || s.trim().isEmpty();
    }

    public static String orDefault(String s, String fallback) {
        return isBlank(s) ? fallback : s;
    }
}
