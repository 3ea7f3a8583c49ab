package org.demo.util;

public enum Ids {
    INSTANCE;

    private static int counter;

    public static String next(String prefix) {
        counter++;
        return prefix + "-" + counter;
    }

    public static void reset() {
        counter = 0;
    }
}
